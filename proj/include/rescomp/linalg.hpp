#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rescomp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Largest matrix dimension handled by the toolkit.
/// Raised when an iterative solver fails to reach its requested accuracy and
/// no usable partial result exists.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 16;

/// Eigenvalues below this are treated as zero before taking logarithms.
inline constexpr double kEigClamp = 1e-12;
/// Tolerance used when comparing supports of positive operators.
inline constexpr double kSupportTol = 1e-10;

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Only the Hermitian
/// part of `m` is used. Iterates until the off-diagonal Frobenius norm drops
/// below 1e-12 (relative to max(1, ||m||_F)).
EigenDecomposition eig_hermitian(const Matrix& m);

double hermiticity_defect(const Matrix& m);
Matrix hermitian_part(const Matrix& m);

/// Applies a real function to the spectrum of a Hermitian matrix.
template <typename F>
Matrix spectral_map(const EigenDecomposition& e, F&& f) {
  RealVector mapped(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) mapped(i) = f(e.values(i));
  return e.vectors * mapped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

/// Trace norm of a Hermitian matrix.
double trace_norm(const Matrix& m);

/// Real inner product Re Tr(a^dagger b).
inline double inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint().cwiseProduct(b.transpose())).sum().real();
}

/// Re Tr(a b) for Hermitian a, b, without forming the product.
inline double trace_product(const Matrix& a, const Matrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

Matrix kron(const Matrix& a, const Matrix& b);
Matrix projector(const Vector& v);
Matrix identity(int dim);
Matrix basis_projector(int dim, int index);

/// Real orthonormal basis of the d x d Hermitian matrices (matrix units
/// symmetrized and antisymmetrized, normalized in Frobenius norm).
std::vector<Matrix> hermitian_basis(int dim);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

Vector random_pure_vector(int dim, Rng& rng);
Matrix random_density(int dim, Rng& rng, int rank = -1);
Matrix random_real_density(int dim, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);
Matrix random_orthogonal(int dim, Rng& rng);
Matrix random_hermitian(int dim, Rng& rng);
std::vector<double> random_probabilities(int n, Rng& rng);

}  // namespace rescomp
