#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rescomp/linalg.hpp"

using namespace rescomp;

TEST(Eigensolver, MatchesReferenceSpectrum) {
  Rng rng(1);
  for (int d : {1, 2, 3, 5, 8, 16}) {
    const Matrix h = random_hermitian(d, rng);
    const auto e = eig_hermitian(h);
    const auto ref = oracle::eigenvalues(h);
    ASSERT_EQ(e.values.size(), d);
    for (int i = 0; i < d; ++i) EXPECT_NEAR(e.values(i), ref(i), 1e-10) << "d=" << d;
    const Matrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((rebuilt - h).norm(), 1e-10);
    EXPECT_LT((e.vectors.adjoint() * e.vectors - identity(d)).norm(), 1e-10);
  }
}

TEST(Eigensolver, AscendingAndDegenerate) {
  const auto e = eig_hermitian(identity(4));
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), 1.0, 1e-14);
  Matrix z = pauli_z();
  const auto ez = eig_hermitian(z);
  EXPECT_NEAR(ez.values(0), -1.0, 1e-14);
  EXPECT_NEAR(ez.values(1), 1.0, 1e-14);
}

TEST(Eigensolver, UsesHermitianPartOnly) {
  Matrix m(2, 2);
  m << 1, 2, 0, 1;  // Hermitian part has eigenvalues 0 and 2
  const auto e = eig_hermitian(m);
  EXPECT_NEAR(e.values(0), 0.0, 1e-12);
  EXPECT_NEAR(e.values(1), 2.0, 1e-12);
}

TEST(Kron, MixedProductRule) {
  Rng rng(2);
  const Matrix a = random_hermitian(2, rng), b = random_hermitian(3, rng);
  const Matrix c = random_hermitian(2, rng), d = random_hermitian(3, rng);
  EXPECT_LT((kron(a, b) * kron(c, d) - kron(Matrix(a * c), Matrix(b * d))).norm(), 1e-12);
  const Matrix k = kron(pauli_x(), identity(2));
  EXPECT_EQ(k(0, 2), Complex(1.0, 0.0));
  EXPECT_EQ(k(0, 1), Complex(0.0, 0.0));
}

TEST(Paulis, AlgebraAndTraceNorm) {
  const Matrix x = pauli_x(), y = pauli_y(), z = pauli_z();
  EXPECT_LT((x * y - Complex(0, 1) * z).norm(), 1e-15);
  EXPECT_NEAR(trace_norm(x), 2.0, 1e-14);
  EXPECT_NEAR(min_eigenvalue(y), -1.0, 1e-14);
  EXPECT_NEAR(max_eigenvalue(y), 1.0, 1e-14);
}

TEST(HermitianBasis, OrthonormalAndComplete) {
  for (int d : {2, 3, 4}) {
    const auto basis = hermitian_basis(d);
    ASSERT_EQ(static_cast<int>(basis.size()), d * d);
    for (size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LT(hermiticity_defect(basis[i]), 1e-15);
      for (size_t j = 0; j < basis.size(); ++j) EXPECT_NEAR(inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(RandomSamplers, ProduceValidObjects) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const Matrix rho = random_density(d, rng);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_GT(oracle::eigenvalues(rho).minCoeff(), -1e-12);
    const Matrix pure = random_density(d, rng, 1);
    EXPECT_NEAR((pure * pure).trace().real(), 1.0, 1e-10);
    const Matrix u = random_unitary(d, rng);
    EXPECT_LT((u.adjoint() * u - identity(d)).norm(), 1e-12);
    const Matrix o = random_orthogonal(d, rng);
    EXPECT_LT(o.imag().norm(), 1e-15);
    EXPECT_LT((o.transpose() * o - identity(d)).norm(), 1e-12);
    const Matrix r = random_real_density(d, rng);
    EXPECT_LT(r.imag().norm(), 1e-15);
    const auto p = random_probabilities(d, rng);
    double s = 0.0;
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      s += x;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(RandomSamplers, SeedDeterminesStream) {
  Rng a(99), b(99);
  EXPECT_EQ((random_density(3, a) - random_density(3, b)).norm(), 0.0);
}

TEST(InnerProducts, AgreeWithDirectTrace) {
  Rng rng(4);
  const Matrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
  EXPECT_NEAR(trace_product(a, b), (a * b).trace().real(), 1e-12);
  EXPECT_NEAR(inner(a, b), (a.adjoint() * b).trace().real(), 1e-12);
}
