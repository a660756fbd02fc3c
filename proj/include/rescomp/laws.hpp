#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescomp/composite.hpp"
#include "rescomp/divergence.hpp"

namespace rescomp {

/// The transformation bounds are necessary conditions only, so a pair is
/// either excluded by them or not. There is no "allowed" outcome.
enum class Verdict { Forbidden, NotExcluded };

std::string to_string(Verdict v);

/// lhs and rhs of an inequality lhs >= rhs, each with its solver bracket.
struct BoundReport {
  DivergenceResult lhs;
  DivergenceResult rhs;
  Verdict verdict = Verdict::NotExcluded;
  std::string note;
};

/// Compares D(rho || smin(locals)) against D(sigma || smax(locals)). The
/// verdict is Forbidden only when the certified brackets are disjoint.
BoundReport single_shot_verdict(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<FreeStateSet>& locals, const RelEntropyOptions& options = {});

/// Local version: D(rho1 || s1) against D(rho2 || s2).
BoundReport conversion_verdict(const DensityOperator& rho1, const FreeStateSet& s1, const DensityOperator& rho2,
                               const FreeStateSet& s2, const RelEntropyOptions& options = {});

struct ReductionReport {
  DivergenceResult local;
  DivergenceResult min_value;
  DivergenceResult max_value;
  /// |D(rho || smin) - D(rho || smax)| within the combined brackets and both
  /// match the local value within `agreement`.
  bool consistent = false;
  double agreement = 1e-3;
};

/// For a product whose factors other than `resourceful` are locally free.
/// Throws std::invalid_argument if rho is not a product across the locals or
/// a spectator factor is not free.
ReductionReport uncorrelated_reduction(const DensityOperator& rho, const std::vector<FreeStateSet>& locals,
                                       int resourceful, const RelEntropyOptions& options = {});

/// Ratio numerator / denominator with the bracket induced by the two results.
struct RateBound {
  double value = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  DivergenceResult numerator;
  DivergenceResult denominator;
  /// True when the denominator cannot be separated from zero.
  bool unconstrained = false;
};

struct RateOptions {
  Additivity numerator = Additivity::KnownAdditive;
  Additivity denominator = Additivity::KnownAdditive;
  /// Copies used by Additivity::EvaluateN.
  int copies = 2;
  RelEntropyOptions engine;
};

/// Local rate bound D_inf(rho1 || s1) / D_inf(rho2 || s2).
RateBound rate_bound(const DensityOperator& rho1, const FreeStateSet& s1, const DensityOperator& rho2,
                     const FreeStateSet& s2, const RateOptions& options = {});

/// Composite rate bound D_inf(rho || smin) / D_inf(sigma || smax).
RateBound asymptotic_rate_bound(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<FreeStateSet>& locals, const RateOptions& options = {});

/// Bound on distilling `golden` on B from rho_AB with an unrestricted helper A:
/// D(rho_AB || smin(AllStates, B)) over the regularized golden value. The B
/// theory must have a known additive relative entropy.
RateBound assisted_distillation_bound(const DensityOperator& rho_ab, const FreeStateSet& b_set,
                                      const DensityOperator& golden, const RelEntropyOptions& options = {});

/// Lower bound on D(rho_AB || rho_A x rho_B) implied by an observed assisted
/// rate: max(0, rate * D_inf(golden) - D_inf(rho_B)).
double correlation_witness(const DensityOperator& rho_ab, const FreeStateSet& b_set, const DensityOperator& golden,
                           double observed_rate, const RelEntropyOptions& options = {});

struct InducedMonotone {
  /// Largest value found; a lower bound on the supremum over all channels.
  double value = 0.0;
  /// Largest engine value; exceeds `value` by at most the solver gap.
  double estimate = 0.0;
  /// Some output left s2 by the membership test, so the supremum is positive
  /// even when `value` rounds to zero.
  bool detected = false;
  int best_channel = -1;
  int best_auxiliary = -1;
  int evaluated = 0;
  bool certified = true;
};

/// sup over the family and the auxiliary states of D(Tr_1 Lambda(rho1 x mu2) || s2).
/// Channels taking only rho1 skip the auxiliary. When the output has more
/// parties than s2, the leading factor is traced out. If `declared` is given,
/// every channel must belong to it.
InducedMonotone induced_monotone(const DensityOperator& rho1, const FreeStateSet& s2,
                                 const std::vector<KrausChannel>& family, const std::vector<Matrix>& auxiliaries = {},
                                 const std::optional<FreeOpClass>& declared = std::nullopt,
                                 const RelEntropyOptions& options = {});

struct WitnessOptions {
  /// Endpoints of the mixing segment in S2: a non-member and an interior
  /// point. Filled in automatically for two-party separable sets.
  std::optional<Matrix> non_member;
  std::optional<Matrix> interior;
  double delta = 1e-3;
  double bisection_tol = 1e-8;
  int max_iterations = 3000;
  int samples = 1000;
  uint64_t seed = 17;
};

struct WitnessChannel {
  KrausChannel channel;
  /// Normalized witness: Tr W mu >= 1/2 on the free set, Tr W rho < 1/2.
  Matrix witness;
  double rho_value = 0.0;
  double free_infimum = 0.0;
  /// Membership threshold along the segment before rescaling.
  double p_star = 0.0;
  Matrix sigma;
  Matrix tau;
  int verified = 0;
};

/// Measure-and-prepare channel X -> Tr((I - W) X) sigma + Tr(W X) tau that maps
/// s1 into s2 and rho outside s2. Throws std::invalid_argument when rho is in
/// s1 or s2 is not full-dimensional, and NumericalError if the verification
/// on sampled free states fails.
WitnessChannel witness_channel(const DensityOperator& rho, const FreeStateSet& s1, const FreeStateSet& s2,
                               const WitnessOptions& options = {});

struct NogoReport {
  bool passed = false;
  int basis_size = 0;
  double condition_number = 0.0;
  /// Largest off-diagonal norm of the first-party marginal over basis images.
  double basis_offdiagonal = 0.0;
  /// Off-diagonal norm for the maximally entangled input.
  double direct_offdiagonal = 0.0;
  /// Error of the affine expansion of the maximally entangled state.
  double reconstruction_error = 0.0;
  std::string detail;
};

/// Affine-span argument that `channel` cannot create coherence on its first
/// output party from free inputs on party one and any state on the remaining
/// input parties. The product basis spans all Hermitian operators on the rest,
/// so incoherent images of every basis element extend to every input.
NogoReport nogo_entanglement_to_coherence(const KrausChannel& channel, const FreeStateSet& coherence,
                                          double tol = 1e-9);

/// |x><x| per party for the tomographically complete product basis: |j>,
/// (|j>+|k>)/sqrt2 and (|j>+i|k>)/sqrt2.
std::vector<Matrix> product_state_basis(const std::vector<int>& dims);

// --- named constructions -------------------------------------------------------

/// Three qubits "1", "A", "B": moves the state of "1" onto "A", discarding
/// the old "A", "B", entangles it with a fresh |0> on "B" by a CNOT and resets
/// "1" to |0>.
KrausChannel coherence_to_entanglement_map();

/// Two-qubit map X -> Tr(X) |00><00|.
KrausChannel reset_to_zero_map();

}  // namespace rescomp
