// Randomized invariants, seeded per test.

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/composite.hpp"
#include "rescomp/divergence.hpp"

using namespace rescomp;

TEST(Property, FreeOperationsDoNotIncreaseCoherence) {
  Rng rng(90);
  const auto inc = FreeStateSet::incoherent(3);
  for (int t = 0; t < 25; ++t) {
    const Matrix rho = random_density(3, rng);
    const auto op = random_free_op(FreeOpClass::sio(), 3, rng);
    EXPECT_LE(oracle::coherence(op.apply(rho)), oracle::coherence(rho) + 1e-9);
    EXPECT_LE(rel_entropy_of_resource(op.apply(rho), inc).value, rel_entropy_of_resource(rho, inc).value + 1e-9);
  }
}

TEST(Property, DataProcessingForRelativeEntropy) {
  Rng rng(91);
  for (int t = 0; t < 25; ++t) {
    const Matrix rho = random_density(3, rng), sigma = random_density(3, rng);
    const auto ch = KrausChannel(std::vector<Matrix>{random_unitary(3, rng) * std::sqrt(0.5), random_unitary(3, rng) * std::sqrt(0.5)},
                                 TensorStructure::single(3), TensorStructure::single(3));
    EXPECT_LE(relative_entropy(ch.apply(rho), ch.apply(sigma)), relative_entropy(rho, sigma) + 1e-9);
  }
}

TEST(Property, MaxCompositeBelowMinComposite) {
  Rng rng(92);
  const auto inc = FreeStateSet::incoherent(2);
  const auto lo = smin({inc, inc}), hi = smax({inc, inc});
  for (int t = 0; t < 10; ++t) {
    const Matrix rho = random_density(4, rng);
    const auto a = rel_entropy_of_resource(rho, hi), b = rel_entropy_of_resource(rho, lo);
    EXPECT_LE(a.lower_bound, b.upper_bound + 1e-9);
  }
}

TEST(Property, DmaxAndHypothesisOrdering) {
  Rng rng(93);
  const auto inc = FreeStateSet::incoherent(2);
  for (int t = 0; t < 8; ++t) {
    const Matrix rho = random_density(2, rng);
    const double d = rel_entropy_of_resource(rho, inc).value;
    EXPECT_GE(dmax(rho, inc).value, d - 1e-5);
    for (double eps : {0.1, 0.3}) EXPECT_GE(hypothesis_testing(rho, inc, eps).value, -std::log2(1 - eps) - 1e-6);
  }
}

TEST(Property, Faithfulness) {
  Rng rng(94);
  const auto sets = {FreeStateSet::incoherent(2), FreeStateSet::real(2),
                     FreeStateSet::separable(TensorStructure({{"A", 2}, {"B", 2}}))};
  for (const auto& s : sets) {
    for (int t = 0; t < 4; ++t) {
      const Matrix mu = random_free_state(s, rng);
      EXPECT_TRUE(contains(s, mu));
      EXPECT_NEAR(rel_entropy_of_resource(mu, s).value, 0.0, 2e-3) << s.describe();
    }
  }
  EXPECT_GT(rel_entropy_of_resource(plus_y_state(), FreeStateSet::real(2)).value, 0.5);
}

TEST(Property, TraceNormContractsUnderChannels) {
  Rng rng(95);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_density(2, rng), b = random_density(2, rng);
    const auto ch = random_free_op(FreeOpClass::all_ops(), 2, rng);
    EXPECT_LE(trace_norm_distance(ch.apply(a), ch.apply(b)), trace_norm_distance(a, b) + 1e-12);
    EXPECT_NEAR(trace_norm_distance(a, b), oracle::trace_distance(a, b), 1e-10);
  }
}
