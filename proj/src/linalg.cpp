#include "rescomp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rescomp {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition eig_hermitian(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Matrix a = hermitian_part(m);
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-12 * std::max(1.0, a.norm());

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        // Phase rotation makes a(p,q) real, then a real Jacobi rotation zeroes it.
        const Complex phase = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // g = diag(1, phase) * [[c, s], [-s, c]]
        const Complex g00 = c, g01 = s;
        const Complex g10 = -s * phase, g11 = c * phase;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]).real();
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue(const Matrix& m) { return eig_hermitian(m).values(0); }

double max_eigenvalue(const Matrix& m) {
  const auto e = eig_hermitian(m);
  return e.values(e.values.size() - 1);
}

double trace_norm(const Matrix& m) { return eig_hermitian(m).values.cwiseAbs().sum(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Matrix identity(int dim) { return Matrix::Identity(dim, dim); }

Matrix basis_projector(int dim, int index) {
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return m;
}

std::vector<Matrix> hermitian_basis(int dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<size_t>(dim * dim));
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < dim; ++a) basis.push_back(basis_projector(dim, a));
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      Matrix s = Matrix::Zero(dim, dim);
      s(a, b) = r;
      s(b, a) = r;
      basis.push_back(s);
      Matrix t = Matrix::Zero(dim, dim);
      t(a, b) = Complex(0, -r);
      t(b, a) = Complex(0, r);
      basis.push_back(t);
    }
  }
  return basis;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Vector random_pure_vector(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  return v / v.norm();
}

Matrix random_density(int dim, Rng& rng, int rank) {
  if (rank <= 0) rank = dim;
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = Complex(n(rng), n(rng));
  Matrix rho = g * g.adjoint();
  return hermitian_part(rho / rho.trace().real());
}

Matrix random_real_density(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = n(rng);
  Eigen::MatrixXd rho = g * g.transpose();
  rho /= rho.trace();
  return rho.cast<Complex>();
}

Matrix random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0) q.col(i) *= d / mag;
  }
  return q;
}

Matrix random_orthogonal(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  for (int i = 0; i < dim; ++i)
    if (qr.matrixQR()(i, i) < 0) q.col(i) *= -1.0;
  return q.cast<Complex>();
}

Matrix random_hermitian(int dim, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(rng), n(rng));
  return hermitian_part(g);
}

std::vector<double> random_probabilities(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(static_cast<size_t>(n));
  double total = 0.0;
  for (auto& x : p) {
    x = e(rng);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace rescomp
