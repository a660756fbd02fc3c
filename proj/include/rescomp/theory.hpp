#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rescomp/channel.hpp"
#include "rescomp/frank_wolfe.hpp"
#include "rescomp/sdp.hpp"
#include "rescomp/state.hpp"

namespace rescomp {

enum class SetKind { Incoherent, Real, Singleton, Separable, AllStates, MinComposite, MaxComposite, Hull };

std::string to_string(SetKind kind);

/// Descriptor of a closed convex set of density operators on a fixed space.
/// Cheap to copy; the description is shared and immutable.
class FreeStateSet {
 public:
  /// Diagonal states in the orthonormal basis given by the columns of `basis`
  /// (computational basis when empty).
  static FreeStateSet incoherent(int dim, const Matrix& basis = Matrix());
  /// States with real matrix elements in `basis`.
  static FreeStateSet real(int dim, const Matrix& basis = Matrix());
  static FreeStateSet singleton(const DensityOperator& gamma);
  /// Separable states across a two-party cut. Only 2x2 and 2x3 cuts are
  /// accepted, where the PPT test is exact.
  static FreeStateSet separable(const TensorStructure& cut);
  static FreeStateSet all_states(int dim);
  /// Convex hull of products of local free states.
  static FreeStateSet min_composite(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels = {});
  /// States whose every single-local marginal is locally free.
  static FreeStateSet max_composite(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels = {});
  /// Convex hull of finitely many states.
  static FreeStateSet hull(const std::vector<Matrix>& points);

  SetKind kind() const;
  int dim() const;
  /// Party layout. Composite sets carry one entry per party of their locals.
  const TensorStructure& structure() const;
  /// Unitary whose columns are the reference basis (Incoherent, Real).
  const Matrix& basis() const;
  bool has_default_basis() const;
  const Matrix& gamma() const;
  const std::vector<FreeStateSet>& locals() const;
  /// Number of parties each local occupies, in order (composites only).
  const std::vector<int>& local_party_counts() const;
  const std::vector<Matrix>& points() const;

  bool has_closed_form_closest() const;
  bool has_extreme_point_oracle() const;
  bool has_linear_membership() const;
  /// True when the set has nonempty interior relative to the state space.
  bool is_full_dimensional() const;
  /// Returns a copy carrying new party labels (same count and dims).
  FreeStateSet relabeled(const std::vector<std::string>& labels) const;

  std::string describe() const;

 private:
  struct Impl;
  explicit FreeStateSet(std::shared_ptr<const Impl> impl);
  static FreeStateSet composite(SetKind kind, const std::vector<FreeStateSet>& locals,
                                const std::vector<std::string>& labels);
  std::shared_ptr<const Impl> impl_;
};

/// Membership verdict. Incoherent and Real compare the Frobenius norm of the
/// forbidden part against `tol`; Singleton uses trace distance; Separable uses
/// the partial-transpose spectrum. Min-composites use exact reductions where
/// available and otherwise the Hilbert-Schmidt distance to the set (threshold
/// max(tol, 1e-6)).
bool contains(const FreeStateSet& set, const Matrix& rho, double tol = 1e-8);
bool contains(const FreeStateSet& set, const DensityOperator& rho, double tol = 1e-8);

/// Free state whose support contains the support of every member.
Matrix reference_state(const FreeStateSet& set);

/// Finite extreme-point list when one exists (Incoherent, Singleton, Hull,
/// and min-composites built only from those).
std::optional<std::vector<Matrix>> extreme_points(const FreeStateSet& set);

struct LmoOptions {
  int restarts = 20;
  int max_sweeps = 200;
  /// Tighten heuristic oracles with a semidefinite lower bound when the set
  /// has a cone representation.
  bool certify = false;
};

/// argmin over the set of Re Tr(G mu).
LmoResult linear_minimization_oracle(const FreeStateSet& set, const Matrix& g, Rng& rng, const LmoOptions& options = {});

/// sup over the set of Tr(sigma P). `upper_bound` is rigorous when `exact`.
struct SupportValue {
  double value = 0.0;
  double upper_bound = 0.0;
  Matrix argmax;
  bool exact = true;
};
SupportValue support_function(const FreeStateSet& set, const Matrix& p, Rng& rng, const LmoOptions& options = {});

struct ClosestState {
  Matrix state;
  double divergence = 0.0;
};
/// Closed-form minimizer of the relative entropy (Incoherent, Singleton).
/// Throws std::invalid_argument for other kinds.
ClosestState closest_free_state(const FreeStateSet& set, const Matrix& rho);

Matrix random_free_state(const FreeStateSet& set, Rng& rng);
/// States used to verify resource non-generation: the extreme points when the
/// list is finite, otherwise `samples` sampled boundary states.
std::vector<Matrix> verification_states(const FreeStateSet& set, Rng& rng, int samples, bool* exhaustive = nullptr);

// --- cone representations for the semidefinite solver -------------------------

/// A Hermitian expression e = L(X_block) on a space with structure `structure`,
/// given through the adjoint of L.
struct LinearView {
  int block = 0;
  TensorStructure structure;
  std::function<Matrix(const Matrix&)> adjoint;
  double trace_bound = 1.0;
};

/// Whether membership in the cone generated by the set is expressible with
/// linear equalities and extra PSD blocks.
bool has_cone_representation(const FreeStateSet& set);
/// Adds constraints forcing e into cone(set). The PSD-ness of e itself must
/// be guaranteed by the caller. Throws if not representable.
void add_cone_constraints(SdpProblem& problem, const FreeStateSet& set, const LinearView& e);

/// Minimizes Re Tr(G X) over the set via its cone representation.
LmoResult sdp_linear_minimization(const FreeStateSet& set, const Matrix& g);

// --- free operations ---------------------------------------------------------

enum class OpKind { SIO, RealOps, Unital, AllOps, RNG, Lfocc };

std::string to_string(OpKind kind);

struct FreeOpClass {
  OpKind kind = OpKind::AllOps;
  Matrix basis;
  std::shared_ptr<const FreeStateSet> set;
  std::vector<std::pair<std::string, FreeOpClass>> locals;

  static FreeOpClass sio(const Matrix& basis = Matrix());
  static FreeOpClass real_ops(const Matrix& basis = Matrix());
  static FreeOpClass unital();
  static FreeOpClass all_ops();
  static FreeOpClass rng(const FreeStateSet& set);
  static FreeOpClass lfocc(std::vector<std::pair<std::string, FreeOpClass>> per_party);

  std::string describe() const;
};

struct OpCheck {
  bool passed = false;
  /// "normal-form", "exhaustive", "verified on N states", "unitality", "trivial".
  std::string mode;
  int checked = 0;
  std::optional<Matrix> counterexample;
  std::string note;
};

/// Decides membership of an explicit Kraus family in a class. SIO and RealOps
/// test the given representation, not all equivalent ones.
OpCheck check_op_class(const KrausChannel& channel, const FreeOpClass& cls, double tol = 1e-9, uint64_t seed = 11,
                       int samples = 200);
bool op_in_class(const KrausChannel& channel, const FreeOpClass& cls, double tol = 1e-9);

/// Checks every round family of a protocol against the class of its acting party.
OpCheck check_protocol_class(const LfoccProtocol& protocol, const FreeOpClass& cls, double tol = 1e-9);

/// Random member of an operation class acting on a single system of dimension
/// `dim`. RNG classes mix replacement channels with class-specific families.
/// LFOCC classes cannot be sampled this way and throw.
KrausChannel random_free_op(const FreeOpClass& cls, int dim, Rng& rng);

/// SIO normal form test for a single Kraus operator.
bool is_sio_kraus(const Matrix& k, double tol = 1e-9);

}  // namespace rescomp
