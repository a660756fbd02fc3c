#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rescomp/theory.hpp"

namespace rescomp {

/// A local resource theory: its free states and its free operations.
struct LocalTheory {
  FreeStateSet states;
  FreeOpClass ops;
};

/// Convex hull of products of local free states (at least two locals).
FreeStateSet smin(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels = {});
/// States whose single-local marginals are all locally free.
FreeStateSet smax(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels = {});

/// Convex mixture of product channels; terms[k] lists the local factors of
/// the k-th product.
KrausChannel fmin_element(const std::vector<std::vector<KrausChannel>>& terms, const std::vector<double>& weights);
KrausChannel fmin_element(const std::vector<KrausChannel>& locals);
/// Random mixture of `terms` products of sampled local free operations.
KrausChannel random_fmin_element(const std::vector<LocalTheory>& locals, Rng& rng, int terms = 2);

/// X -> sum_k Tr(E_k X) sigma_k for a random POVM {E_k} on `in` and random
/// members sigma_k of `out_set`. Every output lies in `out_set`.
KrausChannel random_measure_prepare(const TensorStructure& in, const FreeStateSet& out_set, Rng& rng, int outcomes = 4);

struct ConditionVerdict {
  std::string name;
  bool passed = true;
  /// "exhaustive", "sampled" or "skipped".
  std::string mode = "sampled";
  int checked = 0;
  std::optional<Matrix> counterexample_state;
  std::optional<KrausChannel> counterexample_channel;
  std::string detail;
};

struct AxiomOptions {
  int state_samples = 200;
  int channel_samples = 50;
  uint64_t seed = 2024;
  double tol = 1e-8;
  /// Predicate for condition (b); resource non-generating maps of the
  /// candidate set when absent.
  std::optional<FreeOpClass> candidate_class;
};

struct AxiomReport {
  std::vector<ConditionVerdict> conditions;
  uint64_t seed = 0;
  bool passed() const;
  const ConditionVerdict& get(const std::string& name) const;
};

/// Checks the four composite-theory conditions: free product states, free
/// product operations, free marginal states, free marginal operations. The
/// candidate's parties are the concatenation of the locals' parties.
AxiomReport check_axioms(const FreeStateSet& candidate_states, const std::vector<KrausChannel>& candidate_ops,
                         const std::vector<LocalTheory>& locals, const AxiomOptions& options = {});

struct SandwichReport {
  ConditionVerdict lower;  // smin inside the set
  ConditionVerdict upper;  // the set inside smax
  bool passed() const { return lower.passed && upper.passed; }
};
SandwichReport check_sandwich(const FreeStateSet& set, const std::vector<FreeStateSet>& locals,
                              const AxiomOptions& options = {});

/// Multi-copy family: n -> free set on n copies of a base system, copies in
/// order (copy 1 parties, copy 2 parties, ...).
using SetFamily = std::map<int, FreeStateSet>;

struct BpReport {
  std::vector<ConditionVerdict> axioms;
  uint64_t seed = 0;
  bool passed() const;
  const ConditionVerdict& get(const std::string& name) const;
};

/// Sampled checks of convexity, a full-rank member, closure under removing
/// the last copy, closure under tensor products and under swapping copies.
BpReport check_bp_axioms(const SetFamily& family, int max_n, const AxiomOptions& options = {});

/// Two-qubit base with S_1 the states of maximally mixed marginals and S_2 the
/// hull of S_1 products with the four-dimensional maximally mixed state.
SetFamily bp_violation_family();

}  // namespace rescomp
