#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rescomp/state.hpp"

namespace rescomp {

/// Completely positive trace-preserving map stored as a Kraus family.
class KrausChannel {
 public:
  /// Throws std::invalid_argument if the family is empty, shapes disagree
  /// with the structures, or sum K^dagger K deviates from I by more than `tol`.
  KrausChannel(std::vector<Matrix> kraus, TensorStructure in, TensorStructure out, double tol = 1e-9);

  static KrausChannel identity(const TensorStructure& s);
  static KrausChannel unitary(const Matrix& u, const TensorStructure& s);
  /// X -> Tr(X) sigma.
  static KrausChannel replacement(const TensorStructure& in, const DensityOperator& sigma);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const TensorStructure& in_structure() const { return in_; }
  const TensorStructure& out_structure() const { return out_; }
  int in_dim() const { return in_.total_dim(); }
  int out_dim() const { return out_.total_dim(); }

  /// Linear action on an arbitrary operator.
  Matrix apply(const Matrix& x) const;
  DensityOperator apply(const DensityOperator& rho) const;
  /// Heisenberg-picture action: sum K^dagger Y K.
  Matrix apply_adjoint(const Matrix& y) const;

  /// J = sum_{a,b} |a><b| (x) E(|a><b|), input factor first.
  Matrix choi() const;
  /// Largest deviation of sum K^dagger K from the identity.
  double trace_preservation_defect() const;

 private:
  std::vector<Matrix> kraus_;
  TensorStructure in_;
  TensorStructure out_;
};

/// Second after first.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);
KrausChannel tensor(const KrausChannel& a, const KrausChannel& b);
/// sum_k w_k Lambda_k, realized with sqrt(w_k)-scaled Kraus operators.
KrausChannel mixture(const std::vector<KrausChannel>& channels, const std::vector<double>& weights);

/// Kraus operators from the spectral decomposition of a Choi matrix (same
/// convention as KrausChannel::choi). Eigenvalues below 1e-12 are dropped.
KrausChannel from_choi(const Matrix& choi, const TensorStructure& in, const TensorStructure& out, double tol = 1e-8);
/// Builds the channel of a linear map given pointwise on matrix units.
KrausChannel from_linear_map(const std::function<Matrix(const Matrix&)>& map, const TensorStructure& in,
                             const TensorStructure& out, double tol = 1e-8);

/// X -> Tr_{others} Lambda(X (x) frozen states), with X placed at `target` in the
/// input and `target` kept in the output. Every other input party needs a frozen state.
KrausChannel marginal_channel(const KrausChannel& channel, const std::string& target,
                              const std::map<std::string, DensityOperator>& frozen);
/// Diagnostic variant that freezes every other input party in its maximally mixed state.
KrausChannel choi_marginal_channel(const KrausChannel& channel, const std::string& target);

/// Trace norm of Lambda(I/d) - I/d. Requires equal input and output dimension.
double unitality_defect(const KrausChannel& channel);
bool is_unital(const KrausChannel& channel, double tol = 1e-9);

/// Elementary channels used throughout the tests and scenarios.
KrausChannel dephasing_channel(int dim);
KrausChannel swap_channel(const TensorStructure& s, int a, int b);
/// Pauli-X unitary channel on a qubit.
KrausChannel pauli_x_channel();

struct Povm {
  std::vector<Matrix> elements;

  /// Throws std::invalid_argument unless every element is PSD within 1e-10
  /// and the elements sum to I within 1e-9.
  void validate() const;
};

/// One round of a protocol: the acting party applies, for every classical
/// history reachable so far, a local Kraus family whose operator indices are
/// the outcomes broadcast to later rounds.
struct LfoccRound {
  std::string party;
  std::map<std::string, std::vector<Matrix>> branches;
};

/// Round-based protocol of locally acting Kraus families with classical
/// communication. Histories are outcome indices joined by '.', with the empty
/// string for the first round.
class LfoccProtocol {
 public:
  LfoccProtocol(TensorStructure structure, std::vector<LfoccRound> rounds);

  const TensorStructure& structure() const { return structure_; }
  const std::vector<LfoccRound>& rounds() const { return rounds_; }

  /// Histories reachable after `round` rounds, in lexicographic branch order.
  std::vector<std::string> histories(size_t round) const;
  /// Local Kraus family used in `round` after history `h`.
  const std::vector<Matrix>& family(size_t round, const std::string& h) const;

 private:
  TensorStructure structure_;
  std::vector<LfoccRound> rounds_;
};

std::string extend_history(const std::string& h, int outcome);

inline constexpr int kMaxLfoccBranches = 64;

/// Global Kraus family formed by all history products, last round leftmost.
KrausChannel compile_lfocc(const LfoccProtocol& protocol);

/// Samples one branch per round with the Born probabilities and returns the
/// normalized post-measurement state together with the history taken.
std::pair<Matrix, std::string> sample_lfocc_branch(const LfoccProtocol& protocol, const Matrix& rho, Rng& rng);

/// Effective measurement operator on `source_party` when `element` is measured
/// on `measured_party` after the channel: Tr_{others}[(aux) Lambda^dagger(P)],
/// with the remaining input parties prepared in `aux` (maximally mixed when
/// absent). With a single input party this is Lambda^dagger(P).
Matrix effective_povm(const KrausChannel& channel, const Matrix& element, const std::string& measured_party,
                      const std::string& source_party = "",
                      const std::map<std::string, DensityOperator>& aux = {});

}  // namespace rescomp
