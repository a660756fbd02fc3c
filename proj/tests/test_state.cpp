#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/state.hpp"

using namespace rescomp;

TEST(TensorStructure, LookupAndSubsets) {
  const TensorStructure s({{"A", 2}, {"B", 3}, {"C", 2}});
  EXPECT_EQ(s.total_dim(), 12);
  EXPECT_EQ(s.index_of("B"), 1);
  EXPECT_TRUE(s.contains("C"));
  EXPECT_FALSE(s.contains("D"));
  EXPECT_THROW(s.index_of("D"), std::invalid_argument);
  EXPECT_EQ(s.subset({0, 2}).dims(), (std::vector<int>{2, 2}));
  EXPECT_EQ(s.concat(TensorStructure::single(4, "D")).total_dim(), 48);
}

TEST(TensorStructure, RejectsDuplicatesAndBadDims) {
  EXPECT_THROW(TensorStructure({{"A", 2}, {"A", 2}}), std::invalid_argument);
  EXPECT_THROW(TensorStructure({{"A", 0}}), std::invalid_argument);
}

TEST(DensityOperator, ValidatesInvariants) {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  EXPECT_THROW(DensityOperator{bad}, std::invalid_argument);
  Matrix unnormalized = identity(2);
  EXPECT_THROW(DensityOperator{unnormalized}, std::invalid_argument);
  Matrix nonherm = maximally_mixed(2).matrix();
  nonherm(0, 1) = 0.3;
  EXPECT_THROW(DensityOperator{nonherm}, std::invalid_argument);
  EXPECT_THROW(DensityOperator(maximally_mixed(4).matrix(), TensorStructure({{"A", 2}, {"B", 3}})),
               std::invalid_argument);
  EXPECT_TRUE(is_density(maximally_mixed(3).matrix()));
}

TEST(NamedStates, Definitions) {
  EXPECT_NEAR(plus_state().matrix()(0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(minus_state().matrix()(0, 1).real(), -0.5, 1e-15);
  EXPECT_NEAR(plus_y_state().matrix()(1, 0).imag(), 0.5, 1e-15);
  const auto phi = maximally_entangled(3);
  EXPECT_EQ(phi.structure().labels(), (std::vector<std::string>{"A", "B"}));
  EXPECT_NEAR(phi.matrix()(0, 8).real(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(basis_state(3, 2).matrix()(2, 2).real(), 1.0, 0.0);
}

TEST(PartialTrace, MatchesIndexSums) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int da = 2 + trial % 2, db = 2 + (trial / 2) % 3;
    const Matrix rho = random_density(da * db, rng);
    const TensorStructure s({{"A", da}, {"B", db}});
    EXPECT_LT((partial_trace(rho, s, {0}) - oracle::trace_second(rho, da, db)).norm(), 1e-13);
    EXPECT_LT((partial_trace(rho, s, {1}) - oracle::trace_first(rho, da, db)).norm(), 1e-13);
    EXPECT_LT((marginal(rho, s, 1) - oracle::trace_first(rho, da, db)).norm(), 1e-13);
  }
}

TEST(PartialTrace, ByLabelAndOfProducts) {
  Rng rng(6);
  const DensityOperator a(random_density(2, rng), TensorStructure::single(2, "A"));
  const DensityOperator b(random_density(3, rng), TensorStructure::single(3, "B"));
  const DensityOperator c(random_density(2, rng), TensorStructure::single(2, "C"));
  const auto abc = tensor({a, b, c});
  const auto ac = partial_trace(abc, {"A", "C"});
  EXPECT_EQ(ac.structure().labels(), (std::vector<std::string>{"A", "C"}));
  EXPECT_LT((ac.matrix() - kron(a.matrix(), c.matrix())).norm(), 1e-13);
  EXPECT_THROW(tensor(a, a), std::invalid_argument);
}

TEST(Permute, SwapsFactorsConsistently) {
  Rng rng(7);
  const Matrix x = random_density(2, rng), y = random_density(3, rng);
  const TensorStructure s({{"A", 2}, {"B", 3}});
  const Matrix swapped = permute(kron(x, y), s, {1, 0});
  EXPECT_LT((swapped - kron(y, x)).norm(), 1e-14);
  const Matrix p = permutation_unitary(s, {1, 0});
  EXPECT_LT((p * kron(x, y) * p.adjoint() - kron(y, x)).norm(), 1e-14);
  const Matrix rho = random_density(6, rng);
  EXPECT_LT((permute(permute(rho, s, {1, 0}), TensorStructure({{"B", 3}, {"A", 2}}), {1, 0}) - rho).norm(), 1e-14);
}

TEST(Embed, PlacesLocalOperator) {
  const TensorStructure s({{"A", 2}, {"B", 2}, {"C", 2}});
  EXPECT_LT((embed(pauli_x(), s, 1) - kron(kron(identity(2), pauli_x()), identity(2))).norm(), 1e-15);
}

TEST(PartialTranspose, DetectsEntanglement) {
  const auto phi = maximally_entangled();
  const Matrix pt = partial_transpose(phi, "B");
  EXPECT_NEAR(oracle::eigenvalues(pt).minCoeff(), -0.5, 1e-12);
  Rng rng(8);
  const Matrix prod = kron(random_density(2, rng), random_density(2, rng));
  EXPECT_GT(oracle::eigenvalues(partial_transpose(prod, TensorStructure({{"A", 2}, {"B", 2}}), 0)).minCoeff(), -1e-12);
}

TEST(Entropy, MatchesReference) {
  Rng rng(9);
  for (int d : {2, 3, 4, 6}) {
    const Matrix rho = random_density(d, rng);
    EXPECT_NEAR(von_neumann_entropy(rho), oracle::entropy(rho), 1e-10);
  }
  EXPECT_NEAR(von_neumann_entropy(maximally_mixed(8)), 3.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(plus_state()), 0.0, 1e-12);
}

TEST(RelativeEntropy, KnownValuesAndSupport) {
  EXPECT_NEAR(relative_entropy(plus_state(), maximally_mixed(2)), 1.0, 1e-12);
  EXPECT_EQ(relative_entropy(plus_state().matrix(), basis_projector(2, 0)), kInfinity);
  // Commuting case reduces to the classical formula.
  Matrix p = Matrix::Zero(2, 2), q = Matrix::Zero(2, 2);
  p(0, 0) = 0.7;
  p(1, 1) = 0.3;
  q(0, 0) = 0.4;
  q(1, 1) = 0.6;
  const double ref = 0.7 * std::log2(0.7 / 0.4) + 0.3 * std::log2(0.3 / 0.6);
  EXPECT_NEAR(relative_entropy(p, q), ref, 1e-12);
  Rng rng(10);
  const Matrix r = random_density(3, rng);
  EXPECT_NEAR(relative_entropy(r, r), 0.0, 1e-10);
}

TEST(Dephase, InComputationalAndRotatedBasis) {
  const Matrix d = dephase(plus_state().matrix());
  EXPECT_LT((d - maximally_mixed(2).matrix()).norm(), 1e-15);
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  EXPECT_LT((dephase(plus_state().matrix(), h) - plus_state().matrix()).norm(), 1e-14);
}

TEST(TraceDistance, FullTraceNorm) {
  EXPECT_NEAR(trace_norm_distance(basis_state(2, 0), basis_state(2, 1)), 2.0, 1e-14);
  EXPECT_NEAR(trace_norm_distance(basis_state(2, 0), maximally_mixed(2)), 1.0, 1e-14);
  Rng rng(11);
  const Matrix a = random_density(4, rng), b = random_density(4, rng);
  EXPECT_NEAR(trace_norm_distance(a, b), oracle::trace_distance(a, b), 1e-10);
}
