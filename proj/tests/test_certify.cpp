#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rescomp/certify.hpp"

using namespace rescomp;

namespace {

const TensorStructure kA = TensorStructure::single(2, "A");

}  // namespace

TEST(Rz, DiagonalPhases) {
  const Matrix u = rz(M_PI / 2);
  EXPECT_NEAR(std::arg(u(1, 1) / u(0, 0)), M_PI / 2, 1e-14);
  EXPECT_LT((u.adjoint() * u - identity(2)).norm(), 1e-15);
  // Maps |+y> to |->, up to a phase.
  const Matrix out = u * plus_y_state().matrix() * u.adjoint();
  EXPECT_LT((out - minus_state().matrix()).norm(), 1e-14);
}

TEST(Remote, CaseStudyWithRealTests) {
  const auto inc = FreeStateSet::incoherent(2);
  const auto id = KrausChannel::identity(kA);
  const auto rot = KrausChannel::unitary(rz(M_PI / 2), kA);
  RemoteOptions ro;
  ro.tests = TestClass::Real;
  const auto plain = remote_certification(plus_y_state(), inc, {id}, 0.5, ro);
  EXPECT_NEAR(plain.value, plain.floor, 1e-6);
  const auto full = remote_certification(plus_y_state(), inc, {id, rot}, 0.5, ro);
  EXPECT_EQ(full.value, kInfinity);
  EXPECT_EQ(full.achiever, 1);
  EXPECT_EQ(full.ceiling, kInfinity);
  const auto e = certification_errors(plus_y_state(), inc, rot, Matrix((identity(2) - pauli_x()) / 2.0));
  EXPECT_NEAR(e.alpha, 0.5, 1e-12);
  EXPECT_NEAR(e.beta, 0.0, 1e-12);
}

TEST(Remote, NeverExceedsCeiling) {
  Rng rng(70);
  const auto inc = FreeStateSet::incoherent(2);
  for (int t = 0; t < 5; ++t) {
    const DensityOperator rho(random_density(2, rng));
    std::vector<KrausChannel> fam{KrausChannel::unitary(random_unitary(2, rng), kA),
                                  KrausChannel::unitary(random_unitary(2, rng), kA)};
    const auto r = remote_certification(rho, inc, fam, 0.2);
    EXPECT_LE(r.value, r.ceiling + 1e-6);
    EXPECT_GE(r.value, r.floor - 1e-6);
    EXPECT_EQ(r.per_channel.size(), 2u);
  }
}

TEST(InducedChannel, TwoPartyPreprocessing) {
  // Swap followed by tracing the first output: the receiver gets the sender's state.
  const TensorStructure ab({{"A", 2}, {"B", 2}});
  const auto swap = swap_channel(ab, 0, 1);
  const auto ch = induced_channel(swap, 2);
  Rng rng(71);
  const Matrix x = random_density(2, rng);
  EXPECT_LT((ch.apply(x) - x).norm(), 1e-13);
  const auto keep = induced_channel(KrausChannel::identity(ab), 2);
  EXPECT_LT((keep.apply(x) - maximally_mixed(2).matrix()).norm(), 1e-13);
  EXPECT_THROW(induced_channel(swap, 3), std::invalid_argument);
}

TEST(Lfocc, SampledProtocolsStayDiagonal) {
  Rng rng(72);
  const TensorStructure ab({{"A", 2}, {"B", 2}});
  const auto cls = FreeOpClass::lfocc({{"A", FreeOpClass::sio()}, {"B", FreeOpClass::real_ops()}});
  const auto inc = FreeStateSet::incoherent(2);
  for (int t = 0; t < 40; ++t) {
    const auto p = random_lfocc_protocol(ab, cls, 1 + t % 3, rng);
    Matrix test = random_real_density(2, rng);
    test /= max_eigenvalue(test);
    const auto c = lfocc_ceiling(plus_state(), inc, p, test, 0.25, cls);
    EXPECT_LE(c.offdiagonal, 1e-10);
    EXPECT_TRUE(c.diagonal);
    EXPECT_LE(c.report.value, c.report.ceiling + 1e-6);
    EXPECT_LE(c.report.alpha, 0.25 + 1e-12);
  }
}

TEST(Lfocc, OutOfClassProtocolRejected) {
  const TensorStructure ab({{"A", 2}, {"B", 2}});
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  LfoccRound r{"A", {{"", {h}}}};
  const LfoccProtocol p(ab, {r});
  const auto cls = FreeOpClass::lfocc({{"A", FreeOpClass::sio()}, {"B", FreeOpClass::sio()}});
  EXPECT_THROW(lfocc_ceiling(plus_state(), FreeStateSet::incoherent(2), p, identity(2), 0.25, cls),
               std::invalid_argument);
}

TEST(RngOptimal, ReachesStandardValue) {
  const auto inc = FreeStateSet::incoherent(2);
  for (double eps : {0.1, 0.25}) {
    const auto [ch, rep] = rng_optimal_protocol(plus_state(), inc, inc, basis_state(2, 0), eps);
    EXPECT_NEAR(rep.value, rep.ceiling, 1e-5);
    EXPECT_NEAR(rep.value, standard_certification(plus_state(), inc, eps).value, 1e-5);
  }
  EXPECT_THROW(rng_optimal_protocol(plus_state(), inc, inc, plus_state(), 0.25), std::invalid_argument);
  const auto single = FreeStateSet::singleton(maximally_mixed(2));
  EXPECT_THROW(rng_optimal_protocol(plus_state(), inc, single, basis_state(2, 0), 0.25), std::invalid_argument);
}
