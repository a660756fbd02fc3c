#include "rescomp/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rescomp {

namespace {

std::vector<int> digits_of(int index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[static_cast<size_t>(k)] = index % dims[static_cast<size_t>(k)];
    index /= dims[static_cast<size_t>(k)];
  }
  return d;
}

int index_of_digits(const std::vector<int>& digits, const std::vector<int>& dims) {
  int idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

void require_structure(const Matrix& m, const TensorStructure& s) {
  if (s.total_dim() != m.rows() || m.rows() != m.cols())
    throw std::invalid_argument("tensor structure does not match operator dimension");
}

double xlog2x(double x) { return x > kEigClamp ? x * std::log2(x) : 0.0; }

}  // namespace

// --- TensorStructure ---------------------------------------------------------

TensorStructure::TensorStructure(std::vector<Party> parties) : parties_(std::move(parties)) {
  std::set<std::string> seen;
  for (const auto& p : parties_) {
    if (p.dim <= 0) throw std::invalid_argument("party '" + p.label + "' has non-positive dimension");
    if (!seen.insert(p.label).second) throw std::invalid_argument("duplicate party label '" + p.label + "'");
  }
}

TensorStructure TensorStructure::single(int dim, std::string label) {
  return TensorStructure({Party{std::move(label), dim}});
}

int TensorStructure::total_dim() const {
  int d = 1;
  for (const auto& p : parties_) d *= p.dim;
  return d;
}

int TensorStructure::index_of(const std::string& label) const {
  for (size_t i = 0; i < parties_.size(); ++i)
    if (parties_[i].label == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown party label '" + label + "'");
}

bool TensorStructure::contains(const std::string& label) const {
  return std::any_of(parties_.begin(), parties_.end(), [&](const Party& p) { return p.label == label; });
}

std::vector<int> TensorStructure::dims() const {
  std::vector<int> d;
  for (const auto& p : parties_) d.push_back(p.dim);
  return d;
}

std::vector<std::string> TensorStructure::labels() const {
  std::vector<std::string> l;
  for (const auto& p : parties_) l.push_back(p.label);
  return l;
}

TensorStructure TensorStructure::concat(const TensorStructure& other) const {
  std::vector<Party> all = parties_;
  all.insert(all.end(), other.parties_.begin(), other.parties_.end());
  return TensorStructure(std::move(all));
}

TensorStructure TensorStructure::subset(const std::vector<int>& indices) const {
  std::vector<Party> out;
  for (int i : indices) out.push_back(parties_.at(static_cast<size_t>(i)));
  return TensorStructure(std::move(out));
}

// --- DensityOperator ---------------------------------------------------------

void validate_density(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("density matrix must be square and nonempty");
  if (m.rows() > kMaxDim) throw std::invalid_argument("dimension exceeds supported maximum of 16");
  if (hermiticity_defect(m) > tol) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(m.trace().real() - 1.0) > tol) throw std::invalid_argument("density matrix does not have unit trace");
  if (min_eigenvalue(m) < -tol) throw std::invalid_argument("density matrix is not positive semidefinite");
}

bool is_density(const Matrix& m, double tol) {
  try {
    validate_density(m, tol);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

DensityOperator::DensityOperator(Matrix m, TensorStructure structure)
    : m_(std::move(m)), structure_(std::move(structure)) {
  validate_density(m_);
  if (structure_.size() == 0) structure_ = TensorStructure::single(static_cast<int>(m_.rows()));
  require_structure(m_, structure_);
  m_ = hermitian_part(m_);
}

DensityOperator::DensityOperator(Matrix m) : DensityOperator(std::move(m), TensorStructure{}) {}

DensityOperator DensityOperator::trusted(Matrix m, TensorStructure structure) {
  DensityOperator out;
  out.m_ = hermitian_part(m);
  out.structure_ = structure.size() == 0 ? TensorStructure::single(static_cast<int>(m.rows())) : std::move(structure);
  require_structure(out.m_, out.structure_);
  return out;
}

DensityOperator DensityOperator::with_structure(TensorStructure s) const { return trusted(m_, std::move(s)); }

// --- named states ------------------------------------------------------------

DensityOperator ket_state(const Vector& v, TensorStructure s) {
  return DensityOperator(projector(v / v.norm()), std::move(s));
}

DensityOperator basis_state(int dim, int index) { return DensityOperator(basis_projector(dim, index)); }

DensityOperator maximally_mixed(int dim) { return DensityOperator(identity(dim) / static_cast<double>(dim)); }

DensityOperator plus_state() {
  Vector v(2);
  v << 1, 1;
  return ket_state(v);
}

DensityOperator minus_state() {
  Vector v(2);
  v << 1, -1;
  return ket_state(v);
}

DensityOperator plus_y_state() {
  Vector v(2);
  v << 1, Complex(0, 1);
  return ket_state(v);
}

DensityOperator maximally_entangled(int d, std::string a, std::string b) {
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return ket_state(v, TensorStructure({Party{std::move(a), d}, Party{std::move(b), d}}));
}

// --- structure operations ----------------------------------------------------

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(kron(a.matrix(), b.matrix()), a.structure().concat(b.structure()));
}

DensityOperator tensor(const std::vector<DensityOperator>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor of empty list");
  DensityOperator out = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

Matrix partial_trace(const Matrix& m, const TensorStructure& s, const std::vector<int>& keep_in) {
  require_structure(m, s);
  std::vector<int> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const auto dims = s.dims();
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);
  std::vector<int> kdims, tdims;
  for (int k : keep) kdims.push_back(dims[static_cast<size_t>(k)]);
  for (int k : traced) tdims.push_back(dims[static_cast<size_t>(k)]);
  const int n = s.total_dim();
  int kd = 1;
  for (int d : kdims) kd *= d;

  std::vector<int> kept_index(static_cast<size_t>(n)), traced_index(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto dg = digits_of(i, dims);
    std::vector<int> kdg, tdg;
    for (int k : keep) kdg.push_back(dg[static_cast<size_t>(k)]);
    for (int k : traced) tdg.push_back(dg[static_cast<size_t>(k)]);
    kept_index[static_cast<size_t>(i)] = index_of_digits(kdg, kdims);
    traced_index[static_cast<size_t>(i)] = index_of_digits(tdg, tdims);
  }
  Matrix out = Matrix::Zero(kd, kd);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (traced_index[static_cast<size_t>(i)] == traced_index[static_cast<size_t>(j)])
        out(kept_index[static_cast<size_t>(i)], kept_index[static_cast<size_t>(j)]) += m(i, j);
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::set<std::string>& keep) {
  std::vector<int> idx;
  for (const auto& label : keep) idx.push_back(rho.structure().index_of(label));
  std::sort(idx.begin(), idx.end());
  return DensityOperator::trusted(partial_trace(rho.matrix(), rho.structure(), idx), rho.structure().subset(idx));
}

Matrix marginal(const Matrix& m, const TensorStructure& s, int party) { return partial_trace(m, s, {party}); }

Matrix embed(const Matrix& local, const TensorStructure& s, int party) {
  const auto dims = s.dims();
  if (local.rows() != dims.at(static_cast<size_t>(party))) throw std::invalid_argument("embed: local dimension mismatch");
  int before = 1, after = 1;
  for (int k = 0; k < party; ++k) before *= dims[static_cast<size_t>(k)];
  for (size_t k = static_cast<size_t>(party) + 1; k < dims.size(); ++k) after *= dims[k];
  return kron(kron(identity(before), local), identity(after));
}

Matrix permutation_unitary(const TensorStructure& s, const std::vector<int>& order) {
  const auto dims = s.dims();
  if (order.size() != dims.size()) throw std::invalid_argument("permutation has wrong length");
  std::vector<int> new_dims;
  for (int k : order) new_dims.push_back(dims.at(static_cast<size_t>(k)));
  const int n = s.total_dim();
  Matrix u = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto dg = digits_of(i, dims);
    std::vector<int> ndg;
    for (int k : order) ndg.push_back(dg[static_cast<size_t>(k)]);
    u(index_of_digits(ndg, new_dims), i) = 1.0;
  }
  return u;
}

Matrix permute(const Matrix& m, const TensorStructure& s, const std::vector<int>& order) {
  require_structure(m, s);
  const Matrix u = permutation_unitary(s, order);
  return u * m * u.adjoint();
}

DensityOperator permute(const DensityOperator& rho, const std::vector<int>& order) {
  std::vector<Party> parties;
  for (int k : order) parties.push_back(rho.structure().parties().at(static_cast<size_t>(k)));
  return DensityOperator::trusted(permute(rho.matrix(), rho.structure(), order), TensorStructure(parties));
}

Matrix partial_transpose(const Matrix& m, const TensorStructure& s, int party) {
  require_structure(m, s);
  const auto dims = s.dims();
  const int n = s.total_dim();
  Matrix out(n, n);
  std::vector<std::vector<int>> dg(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) dg[static_cast<size_t>(i)] = digits_of(i, dims);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto di = dg[static_cast<size_t>(i)];
      auto dj = dg[static_cast<size_t>(j)];
      std::swap(di[static_cast<size_t>(party)], dj[static_cast<size_t>(party)]);
      out(index_of_digits(di, dims), index_of_digits(dj, dims)) = m(i, j);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityOperator& rho, const std::string& party) {
  return partial_transpose(rho.matrix(), rho.structure(), rho.structure().index_of(party));
}

// --- entropies and distances -------------------------------------------------

double von_neumann_entropy(const Matrix& rho) {
  const auto e = eig_hermitian(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) s -= xlog2x(e.values(i));
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.matrix()); }

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  const auto es = eig_hermitian(sigma);
  double cross = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const Vector v = es.vectors.col(i);
    const double w = (v.adjoint() * rho * v)(0, 0).real();
    if (es.values(i) <= kSupportTol) {
      if (w > kSupportTol) return kInfinity;
      continue;
    }
    cross += w * std::log2(es.values(i));
  }
  const auto er = eig_hermitian(rho);
  double neg_entropy = 0.0;
  for (Eigen::Index i = 0; i < er.values.size(); ++i) neg_entropy += xlog2x(er.values(i));
  return std::max(0.0, neg_entropy - cross);
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

Matrix dephase(const Matrix& rho, const Matrix& basis) {
  if (basis.size() == 0) return Matrix(rho.diagonal().asDiagonal());
  if ((basis.adjoint() * basis - identity(static_cast<int>(basis.cols()))).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("dephase: basis is not orthonormal");
  const Matrix r = basis.adjoint() * rho * basis;
  return basis * Matrix(r.diagonal().asDiagonal()) * basis.adjoint();
}

DensityOperator dephase(const DensityOperator& rho, const Matrix& basis) {
  return DensityOperator::trusted(dephase(rho.matrix(), basis), rho.structure());
}

double trace_norm_distance(const Matrix& a, const Matrix& b) { return trace_norm(a - b); }

double trace_norm_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_norm_distance: dimension mismatch");
  return trace_norm_distance(a.matrix(), b.matrix());
}

}  // namespace rescomp
