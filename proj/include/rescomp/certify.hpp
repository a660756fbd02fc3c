#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rescomp/divergence.hpp"

namespace rescomp {

/// Outcome of remote certification over a family of preprocessings.
struct CertReport {
  /// Best -log2 beta over the family.
  double value = 0.0;
  /// Single-party hypothesis-testing value, an upper bound on `value`.
  double ceiling = 0.0;
  /// -log2(1 - eps), reached by guessing.
  double floor = 0.0;
  int achiever = -1;
  /// Optimal test on the receiving side.
  Matrix test;
  double alpha = 0.0;
  double beta = 1.0;
  std::vector<DivergenceResult> per_channel;
  std::string note;
};

/// Type-I and type-II errors of a fixed test after a fixed preprocessing.
struct TestErrors {
  double alpha = 0.0;
  double beta = 1.0;
};

DivergenceResult standard_certification(const DensityOperator& rho, const FreeStateSet& set, double epsilon,
                                        const HypothesisOptions& options = {});

struct RemoteOptions {
  /// Admissible tests on the receiving party.
  TestClass tests = TestClass::All;
  Matrix basis;
  /// State of the receiving input for two-party preprocessings (maximally
  /// mixed when empty).
  Matrix auxiliary;
  uint64_t seed = 7;
};

/// Channel from the sender's system to the receiver's output induced by a
/// preprocessing. A channel on the sender alone is returned unchanged. A
/// two-party channel gets the auxiliary on its second input and loses its
/// first output party.
KrausChannel induced_channel(const KrausChannel& preprocessing, int sender_dim, const Matrix& auxiliary = Matrix());

/// dist_F^eps for an explicit preprocessing family, with the ceiling reported alongside.
CertReport remote_certification(const DensityOperator& rho_a, const FreeStateSet& s_a,
                                const std::vector<KrausChannel>& family, double epsilon,
                                const RemoteOptions& options = {});

/// alpha = sup over s_a of Tr Lambda(sigma) P and beta = Tr Lambda(rho) (I - P).
TestErrors certification_errors(const DensityOperator& rho_a, const FreeStateSet& s_a, const KrausChannel& preprocessing,
                                 const Matrix& test, const Matrix& auxiliary = Matrix(), uint64_t seed = 7);

struct LfoccCertification {
  CertReport report;
  /// Effective measurement on the sender after the protocol.
  Matrix effective;
  double offdiagonal = 0.0;
  bool diagonal = false;
};

/// Evaluates a protocol followed by `test` on the receiver. `classes` maps each
/// party to its local class; the sender is the first party of the protocol.
/// The ceiling is the hypothesis-testing value restricted to tests diagonal in
/// the sender's basis. Throws std::invalid_argument if a round leaves its class.
LfoccCertification lfocc_ceiling(const DensityOperator& rho_a, const FreeStateSet& s_a, const LfoccProtocol& protocol,
                                 const Matrix& test, double epsilon, const FreeOpClass& classes,
                                 const Matrix& auxiliary = Matrix(), uint64_t seed = 7);

/// Random protocol on `structure` alternating parties round by round, each
/// history drawing a fresh Kraus family from the acting party's class.
LfoccProtocol random_lfocc_protocol(const TensorStructure& structure, const FreeOpClass& classes, int rounds, Rng& rng);

/// Preprocessing X_A (x) Y_B -> mu_A (x) X_B followed by an optimal unrestricted
/// test. Requires mu in s_a and s_a inside s_b on sampled states.
std::pair<KrausChannel, CertReport> rng_optimal_protocol(const DensityOperator& rho_a, const FreeStateSet& s_a,
                                                         const FreeStateSet& s_b, const DensityOperator& mu_a,
                                                         double epsilon, uint64_t seed = 7);

/// Diagonal unitary exp(-i theta Z / 2).
Matrix rz(double theta);

}  // namespace rescomp
