#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/divergence.hpp"

using namespace rescomp;

namespace {

const FreeStateSet& sep22() {
  static const auto s = FreeStateSet::separable(TensorStructure({{"A", 2}, {"B", 2}}));
  return s;
}

}  // namespace

TEST(RelEntropy, CoherenceClosedFormMatchesOracle) {
  Rng rng(40);
  const auto inc = FreeStateSet::incoherent(3);
  for (int t = 0; t < 10; ++t) {
    const Matrix rho = random_density(3, rng);
    const auto r = rel_entropy_of_resource(rho, inc);
    EXPECT_EQ(r.method, "closed-form");
    EXPECT_NEAR(r.value, oracle::coherence(rho), 1e-10);
    EXPECT_TRUE(r.certified);
  }
}

TEST(RelEntropy, IterativeEngineAgreesWithClosedForm) {
  Rng rng(41);
  const auto inc = FreeStateSet::incoherent(2);
  RelEntropyOptions o;
  o.force_iterative = true;
  for (int t = 0; t < 5; ++t) {
    const Matrix rho = random_density(2, rng);
    const auto r = rel_entropy_of_resource(rho, inc, o);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.lower_bound, oracle::coherence(rho) + 1e-9);
    EXPECT_GE(r.upper_bound, oracle::coherence(rho) - 1e-9);
    EXPECT_NEAR(r.value, oracle::coherence(rho), 1e-3);
  }
}

TEST(RelEntropy, PureStateEntanglement) {
  Rng rng(42);
  for (int t = 0; t < 4; ++t) {
    const Vector psi = random_pure_vector(4, rng);
    const auto r = rel_entropy_of_resource(Matrix(psi * psi.adjoint()), sep22());
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, oracle::entanglement_entropy(psi, 2, 2), 1e-3);
  }
}

TEST(RelEntropy, WernerStateClosedForm) {
  const Matrix phi = maximally_entangled().matrix();
  for (double p : {0.4, 0.6, 0.9}) {
    const Matrix w = p * phi + (1 - p) * identity(4) / 4.0;
    const double f = p + (1 - p) / 4.0;
    const double ref = f > 0.5 ? 1.0 - oracle::binary_entropy(f) : 0.0;
    EXPECT_NEAR(rel_entropy_of_resource(w, sep22()).value, ref, 1e-3) << "p=" << p;
  }
}

TEST(RelEntropy, SingletonAndInfiniteSupport) {
  const auto single = FreeStateSet::singleton(maximally_mixed(2));
  EXPECT_NEAR(rel_entropy_of_resource(basis_state(2, 0), single).value, 1.0, 1e-12);
  const auto pure = FreeStateSet::singleton(basis_state(2, 0));
  EXPECT_EQ(rel_entropy_of_resource(plus_state(), pure).value, kInfinity);
}

TEST(Dmax, PureCoherenceFormula) {
  Rng rng(43);
  const auto inc = FreeStateSet::incoherent(3);
  for (int t = 0; t < 4; ++t) {
    const Vector psi = random_pure_vector(3, rng);
    const auto r = dmax(Matrix(psi * psi.adjoint()), inc);
    EXPECT_NEAR(r.value, oracle::pure_dmax_coherence(psi), 1e-5);
  }
}

TEST(Dmax, BisectionAgreesWithConeSolver) {
  Rng rng(44);
  const Matrix rho = random_density(2, rng);
  DmaxOptions bis;
  bis.force_bisection = true;
  const auto inc = FreeStateSet::incoherent(2);
  EXPECT_NEAR(dmax(rho, inc).value, dmax(rho, inc, bis).value, 1e-4);
  EXPECT_NEAR(dmax(basis_state(2, 0).matrix(), FreeStateSet::singleton(maximally_mixed(2))).value, 1.0, 1e-6);
  EXPECT_NEAR(dmax(maximally_entangled().matrix(), sep22()).value, 1.0, 1e-4);
}

TEST(Dmax, DominatesRelativeEntropy) {
  Rng rng(45);
  const auto inc = FreeStateSet::incoherent(2);
  for (int t = 0; t < 5; ++t) {
    const Matrix rho = random_density(2, rng);
    EXPECT_GE(dmax(rho, inc).value, rel_entropy_of_resource(rho, inc).value - 1e-6);
  }
}

TEST(HypothesisTesting, NeymanPearsonForCommutingPair) {
  Rng rng(46);
  for (int t = 0; t < 6; ++t) {
    const auto p = random_probabilities(3, rng), q = random_probabilities(3, rng);
    Matrix rho = Matrix::Zero(3, 3), sigma = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) {
      rho(i, i) = p[static_cast<size_t>(i)];
      sigma(i, i) = q[static_cast<size_t>(i)];
    }
    const double eps = 0.1 + 0.1 * t;
    const auto r = hypothesis_testing(rho, FreeStateSet::singleton(DensityOperator(sigma)), eps);
    EXPECT_NEAR(r.value, -std::log2(oracle::np_beta(p, q, eps)), 1e-5) << "eps=" << eps;
  }
}

TEST(HypothesisTesting, MaximallyEntangledAgainstSeparable) {
  for (double eps : {0.1, 0.25, 0.4}) {
    const auto r = hypothesis_testing(maximally_entangled().matrix(), sep22(), eps);
    EXPECT_NEAR(r.value, -std::log2(1.0 - 2.0 * eps), 1e-4) << "eps=" << eps;
  }
  EXPECT_EQ(hypothesis_testing(maximally_entangled().matrix(), sep22(), 0.5).value, kInfinity);
}

TEST(HypothesisTesting, FreeStatesSitAtTheFloor) {
  Rng rng(47);
  const auto inc = FreeStateSet::incoherent(3);
  for (double eps : {0.1, 0.25, 0.5}) {
    const Matrix rho = random_free_state(inc, rng);
    EXPECT_NEAR(hypothesis_testing(rho, inc, eps).value, -std::log2(1.0 - eps), 1e-5);
  }
}

TEST(HypothesisTesting, RestrictedTestClasses) {
  const auto inc = FreeStateSet::incoherent(2);
  const Matrix y = plus_y_state().matrix();
  HypothesisOptions diag;
  diag.tests = TestClass::Diagonal;
  HypothesisOptions real;
  real.tests = TestClass::Real;
  EXPECT_NEAR(hypothesis_testing(y, inc, 0.25, diag).value, -std::log2(0.75), 1e-5);
  EXPECT_NEAR(hypothesis_testing(y, inc, 0.25, real).value, -std::log2(0.75), 1e-5);
  EXPECT_GT(hypothesis_testing(y, inc, 0.25).value, -std::log2(0.75) + 0.1);
  EXPECT_THROW(hypothesis_testing(y, inc, 0.0), std::invalid_argument);
  EXPECT_THROW(hypothesis_testing(y, inc, 1.0), std::invalid_argument);
}

TEST(HypothesisTesting, ThroughIdentityEqualsDirect) {
  const auto inc = FreeStateSet::incoherent(2);
  const auto id = KrausChannel::identity(TensorStructure::single(2));
  const Matrix rho = plus_state().matrix();
  EXPECT_NEAR(hypothesis_testing_through(rho, inc, id, 0.2).value, hypothesis_testing(rho, inc, 0.2).value, 1e-6);
  // Dephasing first erases all coherence.
  EXPECT_NEAR(hypothesis_testing_through(rho, inc, dephasing_channel(2), 0.2).value, -std::log2(0.8), 1e-5);
}

TEST(AlphaValue, SupportOverSet) {
  EXPECT_NEAR(alpha_value(FreeStateSet::incoherent(2), plus_state().matrix()), 0.5, 1e-12);
  EXPECT_NEAR(alpha_value(sep22(), maximally_entangled().matrix()), 0.5, 1e-6);
}

TEST(Regularized, ModesAndCopySet) {
  const auto inc = FreeStateSet::incoherent(2);
  const Matrix plus = plus_state().matrix();
  EXPECT_NEAR(regularized_rel_entropy(plus, inc, Additivity::KnownAdditive).value, 1.0, 1e-10);
  EXPECT_NEAR(regularized_rel_entropy(plus, inc, Additivity::EvaluateN, 2).value, 1.0, 1e-3);
  const auto cs = copy_set(inc, 2);
  EXPECT_EQ(cs.set.dim(), 4);
  EXPECT_EQ(cs.order.size(), 2u);
}
