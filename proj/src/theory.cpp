#include "rescomp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <set>
#include <stdexcept>

namespace rescomp {

struct FreeStateSet::Impl {
  SetKind kind = SetKind::AllStates;
  int dim = 0;
  TensorStructure structure;
  Matrix basis;
  bool default_basis = true;
  Matrix gamma;
  std::vector<FreeStateSet> locals;
  std::vector<int> counts;
  std::vector<Matrix> points;
};

FreeStateSet::FreeStateSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::Incoherent: return "incoherent";
    case SetKind::Real: return "real";
    case SetKind::Singleton: return "singleton";
    case SetKind::Separable: return "separable";
    case SetKind::AllStates: return "all_states";
    case SetKind::MinComposite: return "min_composite";
    case SetKind::MaxComposite: return "max_composite";
    case SetKind::Hull: return "hull";
  }
  return "unknown";
}

namespace {

void check_dim(int dim) {
  if (dim <= 0 || dim > kMaxDim) throw std::invalid_argument("set dimension must be in [1, 16]");
}

Matrix checked_basis(int dim, const Matrix& basis) {
  if (basis.size() == 0) return identity(dim);
  if (basis.rows() != dim || basis.cols() != dim) throw std::invalid_argument("basis has the wrong shape");
  if ((basis.adjoint() * basis - identity(dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("basis is not orthonormal");
  return basis;
}

bool is_identity(const Matrix& m) { return (m - identity(static_cast<int>(m.rows()))).cwiseAbs().maxCoeff() < 1e-14; }

}  // namespace

FreeStateSet FreeStateSet::incoherent(int dim, const Matrix& basis) {
  check_dim(dim);
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::Incoherent;
  p->dim = dim;
  p->structure = TensorStructure::single(dim);
  p->basis = checked_basis(dim, basis);
  p->default_basis = is_identity(p->basis);
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::real(int dim, const Matrix& basis) {
  check_dim(dim);
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::Real;
  p->dim = dim;
  p->structure = TensorStructure::single(dim);
  p->basis = checked_basis(dim, basis);
  p->default_basis = is_identity(p->basis);
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::singleton(const DensityOperator& gamma) {
  check_dim(gamma.dim());
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::Singleton;
  p->dim = gamma.dim();
  p->structure = gamma.structure();
  p->gamma = gamma.matrix();
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::separable(const TensorStructure& cut) {
  const auto d = cut.dims();
  const bool ok = d.size() == 2 && ((d[0] == 2 && (d[1] == 2 || d[1] == 3)) || (d[0] == 3 && d[1] == 2));
  if (!ok) throw std::invalid_argument("separable set is only supported for 2x2 and 2x3 cuts");
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::Separable;
  p->dim = cut.total_dim();
  p->structure = cut;
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::all_states(int dim) {
  check_dim(dim);
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::AllStates;
  p->dim = dim;
  p->structure = TensorStructure::single(dim);
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::composite(SetKind kind, const std::vector<FreeStateSet>& locals,
                                     const std::vector<std::string>& labels) {
  if (locals.empty()) throw std::invalid_argument("composite set needs at least one local set");
  if (!labels.empty() && labels.size() != locals.size())
    throw std::invalid_argument("composite labels must match the number of local sets");
  auto p = std::make_shared<Impl>();
  p->kind = kind;
  p->locals = locals;
  std::vector<Party> parties;
  int dim = 1;
  for (size_t i = 0; i < locals.size(); ++i) {
    const auto& ls = locals[i].structure();
    if (ls.size() == 1) {
      parties.push_back({labels.empty() ? std::to_string(i + 1) : labels[i], locals[i].dim()});
    } else {
      for (const auto& q : ls.parties()) parties.push_back(q);
    }
    p->counts.push_back(static_cast<int>(ls.size()));
    dim *= locals[i].dim();
  }
  // Later parties whose label is taken get the local index appended.
  std::set<std::string> used;
  size_t idx = 0;
  for (size_t i = 0; i < locals.size(); ++i)
    for (int k = 0; k < p->counts[i]; ++k, ++idx) {
      auto& label = parties[idx].label;
      while (used.count(label)) label += "." + std::to_string(i + 1);
      used.insert(label);
    }
  check_dim(dim);
  p->dim = dim;
  p->structure = TensorStructure(std::move(parties));
  return FreeStateSet(p);
}

FreeStateSet FreeStateSet::min_composite(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels) {
  return composite(SetKind::MinComposite, locals, labels);
}

FreeStateSet FreeStateSet::max_composite(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels) {
  return composite(SetKind::MaxComposite, locals, labels);
}

FreeStateSet FreeStateSet::hull(const std::vector<Matrix>& points) {
  if (points.empty()) throw std::invalid_argument("hull needs at least one point");
  const int dim = static_cast<int>(points.front().rows());
  check_dim(dim);
  auto p = std::make_shared<Impl>();
  p->kind = SetKind::Hull;
  p->dim = dim;
  p->structure = TensorStructure::single(dim);
  for (const auto& m : points) {
    if (m.rows() != dim) throw std::invalid_argument("hull points have inconsistent dimensions");
    validate_density(m, 1e-8);
    p->points.push_back(hermitian_part(m));
  }
  return FreeStateSet(p);
}

SetKind FreeStateSet::kind() const { return impl_->kind; }
int FreeStateSet::dim() const { return impl_->dim; }
const TensorStructure& FreeStateSet::structure() const { return impl_->structure; }
const Matrix& FreeStateSet::basis() const { return impl_->basis; }
bool FreeStateSet::has_default_basis() const { return impl_->default_basis; }
const Matrix& FreeStateSet::gamma() const { return impl_->gamma; }
const std::vector<FreeStateSet>& FreeStateSet::locals() const { return impl_->locals; }
const std::vector<int>& FreeStateSet::local_party_counts() const { return impl_->counts; }
const std::vector<Matrix>& FreeStateSet::points() const { return impl_->points; }

bool FreeStateSet::has_closed_form_closest() const {
  return kind() == SetKind::Incoherent || kind() == SetKind::Singleton;
}

bool FreeStateSet::has_extreme_point_oracle() const { return true; }

bool FreeStateSet::has_linear_membership() const {
  switch (kind()) {
    case SetKind::Incoherent:
    case SetKind::Real:
    case SetKind::Singleton:
    case SetKind::AllStates:
      return true;
    case SetKind::MaxComposite:
      return std::all_of(locals().begin(), locals().end(), [](const FreeStateSet& l) { return l.has_linear_membership(); });
    default:
      return false;
  }
}

bool FreeStateSet::is_full_dimensional() const {
  switch (kind()) {
    case SetKind::AllStates:
    case SetKind::Separable:
      return true;
    case SetKind::MinComposite:
    case SetKind::MaxComposite:
      return std::all_of(locals().begin(), locals().end(), [](const FreeStateSet& l) { return l.is_full_dimensional(); });
    case SetKind::Hull: {
      if (points().size() < static_cast<size_t>(dim() * dim())) return false;
      const auto hb = hermitian_basis(dim());
      Eigen::MatrixXd diffs(dim() * dim(), static_cast<Eigen::Index>(points().size() - 1));
      for (size_t k = 1; k < points().size(); ++k)
        for (size_t b = 0; b < hb.size(); ++b)
          diffs(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k - 1)) = trace_product(hb[b], points()[k] - points()[0]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
      lu.setThreshold(1e-10);
      return lu.rank() == dim() * dim() - 1;
    }
    default:
      return false;
  }
}

FreeStateSet FreeStateSet::relabeled(const std::vector<std::string>& labels) const {
  if (labels.size() != structure().size()) throw std::invalid_argument("relabel: wrong number of labels");
  auto p = std::make_shared<Impl>(*impl_);
  std::vector<Party> parties;
  for (size_t i = 0; i < labels.size(); ++i) parties.push_back({labels[i], structure().parties()[i].dim});
  p->structure = TensorStructure(std::move(parties));
  return FreeStateSet(p);
}

std::string FreeStateSet::describe() const {
  std::ostringstream os;
  os << to_string(kind());
  switch (kind()) {
    case SetKind::MinComposite:
    case SetKind::MaxComposite: {
      os << "[";
      for (size_t i = 0; i < locals().size(); ++i) os << (i ? ", " : "") << locals()[i].describe();
      os << "]";
      break;
    }
    case SetKind::Hull:
      os << "(d=" << dim() << ", n=" << points().size() << ")";
      break;
    case SetKind::Separable:
      os << "(" << structure().dims()[0] << "x" << structure().dims()[1] << ")";
      break;
    default:
      os << "(d=" << dim() << (has_default_basis() ? "" : ", custom basis") << ")";
  }
  return os.str();
}

// --- slot helpers ------------------------------------------------------------

namespace {

/// One tensor slot per local set of a composite.
std::vector<int> slot_dims(const std::vector<FreeStateSet>& locals) {
  std::vector<int> d;
  for (const auto& l : locals) d.push_back(l.dim());
  return d;
}

TensorStructure slot_structure(const std::vector<int>& dims) {
  std::vector<Party> parties;
  for (size_t i = 0; i < dims.size(); ++i) parties.push_back({"s" + std::to_string(i), dims[i]});
  return TensorStructure(std::move(parties));
}

std::vector<int> others(int n, int i) {
  std::vector<int> o;
  for (int k = 0; k < n; ++k)
    if (k != i) o.push_back(k);
  return o;
}

int product_of(const std::vector<int>& dims, int skip) {
  int p = 1;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (k != skip) p *= dims[static_cast<size_t>(k)];
  return p;
}

/// Operator equal to `rest` on every slot but `i` and `c` on slot `i`.
Matrix place(const Matrix& rest, const Matrix& c, const std::vector<int>& dims, int i) {
  const int n = static_cast<int>(dims.size());
  if (n == 1) return c;
  std::vector<int> in_dims;
  for (int k = 0; k < n; ++k)
    if (k != i) in_dims.push_back(dims[static_cast<size_t>(k)]);
  in_dims.push_back(dims[static_cast<size_t>(i)]);
  std::vector<int> order(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) order[static_cast<size_t>(k)] = k < i ? k : (k == i ? n - 1 : k - 1);
  const Matrix full = kron(rest, c);
  if (i == n - 1) return full;
  return permute(full, slot_structure(in_dims), order);
}

std::vector<FreeStateSet> remove_at(const std::vector<FreeStateSet>& v, size_t i) {
  std::vector<FreeStateSet> out = v;
  out.erase(out.begin() + static_cast<long>(i));
  return out;
}

/// Min-composite locals with nested min-composites and separable cuts expanded.
std::vector<FreeStateSet> flatten_min(const std::vector<FreeStateSet>& locals) {
  std::vector<FreeStateSet> out;
  for (const auto& l : locals) {
    if (l.kind() == SetKind::MinComposite) {
      for (const auto& x : flatten_min(l.locals())) out.push_back(x);
    } else if (l.kind() == SetKind::Separable) {
      out.push_back(FreeStateSet::all_states(l.structure().dims()[0]));
      out.push_back(FreeStateSet::all_states(l.structure().dims()[1]));
    } else {
      out.push_back(l);
    }
  }
  return out;
}

bool small_ppt_dims(int a, int b) { return (a == 2 && (b == 2 || b == 3)) || (a == 3 && b == 2); }

Matrix clip_to_state(const Matrix& x) {
  const auto e = eig_hermitian(x);
  Matrix s = spectral_map(e, [](double v) { return std::max(v, 0.0); });
  const double tr = s.trace().real();
  if (tr <= 0) throw std::runtime_error("semidefinite solver returned a zero matrix");
  return hermitian_part(s / tr);
}

Matrix basis_vector_projector(const Matrix& u, int k) {
  const Vector v = u.col(k);
  return projector(v);
}

}  // namespace

// --- membership --------------------------------------------------------------

namespace {

bool hs_distance_member(const FreeStateSet& set, const Matrix& rho, double tol);

bool min_contains(const std::vector<FreeStateSet>& locals_in, const Matrix& rho, double tol) {
  const auto locals = flatten_min(locals_in);
  const int n = static_cast<int>(locals.size());
  if (n == 1) return contains(locals[0], rho, tol);
  const auto dims = slot_dims(locals);
  const auto slots = slot_structure(dims);

  for (int i = 0; i < n; ++i) {
    if (locals[static_cast<size_t>(i)].kind() != SetKind::Singleton) continue;
    const Matrix rest = partial_trace(rho, slots, others(n, i));
    if (trace_norm(rho - place(rest, locals[static_cast<size_t>(i)].gamma(), dims, i)) > tol) return false;
    return min_contains(remove_at(locals, static_cast<size_t>(i)), rest, tol);
  }
  for (int i = 0; i < n; ++i) {
    const auto& li = locals[static_cast<size_t>(i)];
    if (li.kind() != SetKind::Incoherent) continue;
    const int di = dims[static_cast<size_t>(i)];
    const Matrix id_rest = identity(product_of(dims, i));
    Matrix dephased = Matrix::Zero(rho.rows(), rho.cols());
    std::vector<Matrix> projs;
    for (int k = 0; k < di; ++k) {
      projs.push_back(place(id_rest, basis_vector_projector(li.basis(), k), dims, i));
      dephased += projs.back() * rho * projs.back();
    }
    if ((rho - dephased).norm() > tol) return false;
    const auto rest_locals = remove_at(locals, static_cast<size_t>(i));
    for (int k = 0; k < di; ++k) {
      const Matrix block = partial_trace(projs[static_cast<size_t>(k)] * rho, slots, others(n, i));
      const double pk = block.trace().real();
      if (pk <= 1e-12) continue;
      if (!min_contains(rest_locals, hermitian_part(block / pk), tol / pk)) return false;
    }
    return true;
  }
  if (n == 2 && locals[0].kind() == SetKind::AllStates && locals[1].kind() == SetKind::AllStates &&
      small_ppt_dims(dims[0], dims[1])) {
    return min_eigenvalue(partial_transpose(rho, slots, 1)) >= -tol;
  }
  return hs_distance_member(FreeStateSet::min_composite(locals), rho, tol);
}

bool hs_distance_member(const FreeStateSet& set, const Matrix& rho, double tol) {
  const double thr = std::max(tol, 1e-6);
  Rng rng(0x5eed);
  FwProblem prob;
  prob.value = [&](const Matrix& x) { return (x - rho).squaredNorm(); };
  prob.gradient = [&](const Matrix& x) { return Matrix(2.0 * (x - rho)); };
  prob.lmo = [&](const Matrix& g) { return linear_minimization_oracle(set, g, rng); };
  prob.line_search = [&](const Matrix& x, const Matrix& d, double tmax) {
    const double dd = d.squaredNorm();
    if (dd <= 0) return 0.0;
    return std::clamp(inner(d, rho - x) / dd, 0.0, tmax);
  };
  FwOptions opt;
  opt.gap = 0.0;
  opt.max_iterations = 3000;
  opt.stop_below = thr * thr;
  opt.stop_above_lower = thr * thr;
  const auto res = frank_wolfe(prob, {{reference_state(set), 1.0}}, opt);
  return res.value <= thr * thr;
}

}  // namespace

bool contains(const FreeStateSet& set, const Matrix& rho, double tol) {
  if (rho.rows() != set.dim() || rho.cols() != set.dim()) throw std::invalid_argument("contains: dimension mismatch");
  if (!is_density(rho, std::max(tol, 1e-10))) return false;
  switch (set.kind()) {
    case SetKind::Incoherent: {
      Matrix r = set.basis().adjoint() * rho * set.basis();
      r.diagonal().setZero();
      return r.norm() <= tol;
    }
    case SetKind::Real: {
      const Matrix r = set.basis().adjoint() * rho * set.basis();
      return r.imag().norm() <= tol;
    }
    case SetKind::Singleton:
      return trace_norm(rho - set.gamma()) <= tol;
    case SetKind::Separable:
      return min_eigenvalue(partial_transpose(rho, set.structure(), 1)) >= -tol;
    case SetKind::AllStates:
      return true;
    case SetKind::Hull:
      return hs_distance_member(set, rho, tol);
    case SetKind::MaxComposite: {
      const auto dims = slot_dims(set.locals());
      const auto slots = slot_structure(dims);
      const int n = static_cast<int>(dims.size());
      for (int i = 0; i < n; ++i) {
        const Matrix m = partial_trace(rho, slots, {i});
        if (!contains(set.locals()[static_cast<size_t>(i)], hermitian_part(m), tol)) return false;
      }
      return true;
    }
    case SetKind::MinComposite:
      return min_contains(set.locals(), rho, tol);
  }
  return false;
}

bool contains(const FreeStateSet& set, const DensityOperator& rho, double tol) { return contains(set, rho.matrix(), tol); }

Matrix reference_state(const FreeStateSet& set) {
  switch (set.kind()) {
    case SetKind::Singleton:
      return set.gamma();
    case SetKind::Hull: {
      Matrix m = Matrix::Zero(set.dim(), set.dim());
      for (const auto& p : set.points()) m += p;
      return m / static_cast<double>(set.points().size());
    }
    case SetKind::MinComposite:
    case SetKind::MaxComposite: {
      Matrix m = Matrix::Identity(1, 1);
      for (const auto& l : set.locals()) m = kron(m, reference_state(l));
      return m;
    }
    default:
      return identity(set.dim()) / static_cast<double>(set.dim());
  }
}

std::optional<std::vector<Matrix>> extreme_points(const FreeStateSet& set) {
  switch (set.kind()) {
    case SetKind::Incoherent: {
      std::vector<Matrix> pts;
      for (int k = 0; k < set.dim(); ++k) pts.push_back(basis_vector_projector(set.basis(), k));
      return pts;
    }
    case SetKind::Singleton:
      return std::vector<Matrix>{set.gamma()};
    case SetKind::Hull:
      return set.points();
    case SetKind::MinComposite: {
      const auto locals = flatten_min(set.locals());
      std::vector<Matrix> pts{Matrix::Identity(1, 1)};
      for (const auto& l : locals) {
        const auto lp = extreme_points(l);
        if (!lp || pts.size() * lp->size() > 4096) return std::nullopt;
        std::vector<Matrix> next;
        for (const auto& a : pts)
          for (const auto& b : *lp) next.push_back(kron(a, b));
        pts = std::move(next);
      }
      return pts;
    }
    default:
      return std::nullopt;
  }
}

// --- linear minimization -----------------------------------------------------

namespace {

LmoResult exact_result(const Matrix& state, const Matrix& g) {
  LmoResult r;
  r.state = state;
  r.value = trace_product(g, state);
  r.lower_bound = r.value;
  r.certified = true;
  return r;
}

Matrix random_pure_state_for(const FreeStateSet& local, Rng& rng) {
  switch (local.kind()) {
    case SetKind::AllStates:
      return projector(random_pure_vector(local.dim(), rng));
    case SetKind::Real: {
      const Matrix o = random_orthogonal(local.dim(), rng);
      const Vector v = local.basis() * o.col(0);
      return projector(v);
    }
    default:
      return random_free_state(local, rng);
  }
}

/// Effective operator on slot t after contracting every other slot with its state.
Matrix contract(const Matrix& g, const std::vector<Matrix>& states, const std::vector<int>& dims, int t) {
  const int n = static_cast<int>(dims.size());
  Matrix w = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) w = kron(w, s == t ? identity(dims[static_cast<size_t>(s)]) : states[static_cast<size_t>(s)]);
  return hermitian_part(partial_trace(w * g, slot_structure(dims), {t}));
}

Matrix kron_all(const std::vector<Matrix>& states) {
  Matrix m = Matrix::Identity(1, 1);
  for (const auto& s : states) m = kron(m, s);
  return m;
}

LmoResult product_lmo(const std::vector<FreeStateSet>& factors, const Matrix& g, Rng& rng, const LmoOptions& opt) {
  const int n = static_cast<int>(factors.size());
  const auto dims = slot_dims(factors);
  std::vector<std::optional<std::vector<Matrix>>> finite(static_cast<size_t>(n));
  size_t combos = 1;
  for (int i = 0; i < n; ++i) {
    const auto kind = factors[static_cast<size_t>(i)].kind();
    if (kind == SetKind::Incoherent || kind == SetKind::Singleton || kind == SetKind::Hull) {
      finite[static_cast<size_t>(i)] = extreme_points(factors[static_cast<size_t>(i)]);
      combos *= finite[static_cast<size_t>(i)]->size();
    }
  }
  if (combos > 4096) {
    for (auto& f : finite) f.reset();
    combos = 1;
  }
  std::vector<int> cont;
  for (int i = 0; i < n; ++i)
    if (!finite[static_cast<size_t>(i)]) cont.push_back(i);

  LmoResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.certified = true;
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  for (size_t c = 0; c < combos; ++c) {
    // Decode the mixed-radix combo index over the finite factors.
    size_t rem = c;
    std::vector<Matrix> states(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& f = finite[static_cast<size_t>(i)];
      if (!f) continue;
      states[static_cast<size_t>(i)] = (*f)[rem % f->size()];
      rem /= f->size();
    }
    if (cont.empty()) {
      const Matrix st = kron_all(states);
      const double v = trace_product(g, st);
      if (v < best.value) {
        best.state = st;
        best.value = v;
      }
      continue;
    }
    if (cont.size() == 1) {
      const int t = cont[0];
      const Matrix geff = contract(g, states, dims, t);
      const auto r = linear_minimization_oracle(factors[static_cast<size_t>(t)], geff, rng, opt);
      states[static_cast<size_t>(t)] = r.state;
      if (r.value < best.value) {
        best.state = kron_all(states);
        best.value = r.value;
      }
      best.certified = best.certified && r.certified;
      continue;
    }
    // Several continuous factors: alternating minimization with restarts.
    best.certified = false;
    for (int rs = 0; rs < opt.restarts; ++rs) {
      for (int t : cont) states[static_cast<size_t>(t)] = random_pure_state_for(factors[static_cast<size_t>(t)], rng);
      double val = std::numeric_limits<double>::infinity();
      for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        double cur = val;
        for (int t : cont) {
          const Matrix geff = contract(g, states, dims, t);
          const auto r = linear_minimization_oracle(factors[static_cast<size_t>(t)], geff, rng, opt);
          states[static_cast<size_t>(t)] = r.state;
          cur = r.value;
        }
        const bool done = val - cur <= 1e-13 * std::max(1.0, std::abs(cur));
        val = cur;
        if (done) break;
      }
      if (val < best.value) {
        best.state = kron_all(states);
        best.value = val;
      }
    }
    best.restarts = opt.restarts;
  }
  best.value = trace_product(g, best.state);
  best.lower_bound = best.value;
  return best;
}

}  // namespace

LmoResult linear_minimization_oracle(const FreeStateSet& set, const Matrix& g_in, Rng& rng, const LmoOptions& options) {
  if (g_in.rows() != set.dim() || g_in.cols() != set.dim()) throw std::invalid_argument("LMO: dimension mismatch");
  const Matrix g = hermitian_part(g_in);
  LmoResult res;
  switch (set.kind()) {
    case SetKind::Incoherent: {
      const Matrix gp = set.basis().adjoint() * g * set.basis();
      Eigen::Index k = 0;
      gp.diagonal().real().minCoeff(&k);
      res = exact_result(basis_vector_projector(set.basis(), static_cast<int>(k)), g);
      break;
    }
    case SetKind::Real: {
      const Matrix gp = set.basis().adjoint() * g * set.basis();
      const Matrix re = gp.real().cast<Complex>();
      const auto e = eig_hermitian(re);
      Eigen::VectorXd v = e.vectors.col(0).real();
      if (v.norm() < 1e-8) v = e.vectors.col(0).imag();
      v.normalize();
      const Vector w = set.basis() * v.cast<Complex>();
      res = exact_result(projector(w), g);
      break;
    }
    case SetKind::Singleton:
      res = exact_result(set.gamma(), g);
      break;
    case SetKind::AllStates: {
      const auto e = eig_hermitian(g);
      const Vector v = e.vectors.col(0);
      res = exact_result(projector(v), g);
      break;
    }
    case SetKind::Hull: {
      size_t best = 0;
      double bv = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < set.points().size(); ++k) {
        const double v = trace_product(g, set.points()[k]);
        if (v < bv) {
          bv = v;
          best = k;
        }
      }
      res = exact_result(set.points()[best], g);
      break;
    }
    case SetKind::Separable: {
      const auto d = set.structure().dims();
      res = product_lmo({FreeStateSet::all_states(d[0]), FreeStateSet::all_states(d[1])}, g, rng, options);
      break;
    }
    case SetKind::MinComposite:
      res = product_lmo(flatten_min(set.locals()), g, rng, options);
      break;
    case SetKind::MaxComposite:
      res = sdp_linear_minimization(set, g);
      break;
  }
  if (!res.certified && options.certify && has_cone_representation(set)) {
    const auto s = sdp_linear_minimization(set, g);
    if (s.certified) {
      res.lower_bound = std::min(res.value, s.lower_bound);
      res.certified = true;
    }
  }
  return res;
}

SupportValue support_function(const FreeStateSet& set, const Matrix& p, Rng& rng, const LmoOptions& options) {
  const auto r = linear_minimization_oracle(set, -p, rng, options);
  SupportValue s;
  s.value = -r.value;
  s.upper_bound = -r.lower_bound;
  s.argmax = r.state;
  s.exact = r.certified;
  return s;
}

ClosestState closest_free_state(const FreeStateSet& set, const Matrix& rho) {
  if (rho.rows() != set.dim()) throw std::invalid_argument("closest_free_state: dimension mismatch");
  if (set.kind() == SetKind::Incoherent) {
    const Matrix sigma = dephase(rho, set.basis());
    return {sigma, std::max(0.0, von_neumann_entropy(sigma) - von_neumann_entropy(rho))};
  }
  if (set.kind() == SetKind::Singleton) return {set.gamma(), relative_entropy(rho, set.gamma())};
  throw std::invalid_argument("no closed form for the closest state in " + set.describe());
}

// --- sampling ----------------------------------------------------------------

namespace {

Matrix kill_marginals(Matrix x, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  const auto slots = slot_structure(dims);
  for (int j = 0; j < n; ++j) {
    const Matrix rest = partial_trace(x, slots, others(n, j));
    const int dj = dims[static_cast<size_t>(j)];
    x -= place(rest, identity(dj) / static_cast<double>(dj), dims, j);
  }
  return x;
}

}  // namespace

Matrix random_free_state(const FreeStateSet& set, Rng& rng) {
  const int d = set.dim();
  std::uniform_int_distribution<int> count(1, 8);
  switch (set.kind()) {
    case SetKind::Incoherent: {
      const auto p = random_probabilities(d, rng);
      Matrix diag = Matrix::Zero(d, d);
      for (int i = 0; i < d; ++i) diag(i, i) = p[static_cast<size_t>(i)];
      return hermitian_part(set.basis() * diag * set.basis().adjoint());
    }
    case SetKind::Real:
      return hermitian_part(set.basis() * random_real_density(d, rng) * set.basis().adjoint());
    case SetKind::Singleton:
      return set.gamma();
    case SetKind::AllStates:
      return random_density(d, rng);
    case SetKind::Hull: {
      const auto w = random_probabilities(static_cast<int>(set.points().size()), rng);
      Matrix m = Matrix::Zero(d, d);
      for (size_t k = 0; k < w.size(); ++k) m += w[k] * set.points()[k];
      return m;
    }
    case SetKind::Separable: {
      const auto dims = set.structure().dims();
      const int k = count(rng);
      const auto w = random_probabilities(k, rng);
      Matrix m = Matrix::Zero(d, d);
      for (int i = 0; i < k; ++i)
        m += w[static_cast<size_t>(i)] * kron(random_density(dims[0], rng), random_density(dims[1], rng));
      return m;
    }
    case SetKind::MinComposite: {
      const int k = count(rng);
      const auto w = random_probabilities(k, rng);
      Matrix m = Matrix::Zero(d, d);
      for (int i = 0; i < k; ++i) {
        Matrix prod = Matrix::Identity(1, 1);
        for (const auto& l : set.locals()) prod = kron(prod, random_free_state(l, rng));
        m += w[static_cast<size_t>(i)] * prod;
      }
      return hermitian_part(m);
    }
    case SetKind::MaxComposite: {
      Matrix prod = Matrix::Identity(1, 1);
      for (const auto& l : set.locals()) prod = kron(prod, random_free_state(l, rng));
      const auto dims = slot_dims(set.locals());
      Matrix x0 = kill_marginals(random_hermitian(d, rng), dims);
      const double nx = x0.norm();
      if (nx < 1e-12) return prod;
      x0 /= nx;
      // Largest t with prod + t x0 >= 0; min eigenvalue is concave in t.
      double lo = 0.0, hi = 4.0;
      if (min_eigenvalue(prod) < 1e-10) hi = 0.0;
      for (int it = 0; it < 60 && hi > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (min_eigenvalue(prod + mid * x0) >= 0) lo = mid;
        else hi = mid;
      }
      std::uniform_real_distribution<double> u(0.0, 1.0);
      return hermitian_part(prod + 0.999 * u(rng) * lo * x0);
    }
  }
  return identity(d) / static_cast<double>(d);
}

std::vector<Matrix> verification_states(const FreeStateSet& set, Rng& rng, int samples, bool* exhaustive) {
  if (auto pts = extreme_points(set)) {
    if (exhaustive) *exhaustive = true;
    return *pts;
  }
  if (exhaustive) *exhaustive = false;
  std::vector<Matrix> out;
  for (int s = 0; s < samples; ++s) {
    switch (set.kind()) {
      case SetKind::AllStates:
      case SetKind::Real:
        out.push_back(random_pure_state_for(set, rng));
        break;
      case SetKind::Separable: {
        const auto d = set.structure().dims();
        out.push_back(kron(projector(random_pure_vector(d[0], rng)), projector(random_pure_vector(d[1], rng))));
        break;
      }
      case SetKind::MinComposite:
      case SetKind::MaxComposite: {
        if (set.kind() == SetKind::MaxComposite && s % 2 == 1) {
          out.push_back(random_free_state(set, rng));
          break;
        }
        Matrix prod = Matrix::Identity(1, 1);
        for (const auto& l : set.locals()) {
          const auto v = verification_states(l, rng, 1);
          std::uniform_int_distribution<size_t> pick(0, v.size() - 1);
          prod = kron(prod, v[pick(rng)]);
        }
        out.push_back(prod);
        break;
      }
      default:
        out.push_back(random_free_state(set, rng));
    }
  }
  return out;
}

// --- cone representations ----------------------------------------------------

namespace {

bool min_plan_ok(const std::vector<FreeStateSet>& locals) {
  if (locals.size() == 1) return has_cone_representation(locals[0]);
  for (size_t i = 0; i < locals.size(); ++i) {
    const auto k = locals[i].kind();
    if (k == SetKind::Singleton || k == SetKind::Incoherent) return min_plan_ok(remove_at(locals, i));
  }
  return locals.size() == 2 && locals[0].kind() == SetKind::AllStates && locals[1].kind() == SetKind::AllStates &&
         small_ppt_dims(locals[0].dim(), locals[1].dim());
}

void add_zero_functional(SdpProblem& p, const LinearView& e, const Matrix& a) {
  const Matrix adj = e.adjoint(a);
  if (adj.cwiseAbs().maxCoeff() < 1e-14) return;
  const int c = p.add_constraint(0.0);
  p.add_term(c, e.block, adj);
}

/// Off-diagonal (indices d..) and imaginary (odd offsets) members of the Hermitian basis.
std::vector<Matrix> off_diagonal_units(int d) {
  const auto hb = hermitian_basis(d);
  return {hb.begin() + d, hb.end()};
}

std::vector<Matrix> imaginary_units(int d) {
  const auto hb = hermitian_basis(d);
  std::vector<Matrix> out;
  for (size_t k = static_cast<size_t>(d) + 1; k < hb.size(); k += 2) out.push_back(hb[k]);
  return out;
}

void add_ppt_block(SdpProblem& p, const LinearView& e, const TensorStructure& cut) {
  const int d = cut.total_dim();
  const int k = p.add_block(d, e.trace_bound);
  for (const auto& b : hermitian_basis(d)) {
    const int c = p.add_constraint(0.0);
    p.add_term(c, e.block, e.adjoint(partial_transpose(b, cut, 1)));
    p.add_term(c, k, b, -1.0);
  }
}

void add_min_cone(SdpProblem& p, const std::vector<FreeStateSet>& locals, const LinearView& e) {
  const int n = static_cast<int>(locals.size());
  if (n == 1) {
    LinearView v = e;
    v.structure = locals[0].structure();
    add_cone_constraints(p, locals[0], v);
    return;
  }
  const auto dims = slot_dims(locals);
  const auto rest_structure = [&](int i) {
    std::vector<int> rd;
    for (int k = 0; k < n; ++k)
      if (k != i) rd.push_back(dims[static_cast<size_t>(k)]);
    return slot_structure(rd);
  };
  for (int i = 0; i < n; ++i) {
    const auto& li = locals[static_cast<size_t>(i)];
    const int di = dims[static_cast<size_t>(i)];
    const int dr = product_of(dims, i);
    if (li.kind() == SetKind::Singleton) {
      const auto hb = hermitian_basis(di);
      for (const auto& b : hermitian_basis(dr))
        for (size_t c = 0; c < hb.size(); ++c) {
          if (c == static_cast<size_t>(di - 1)) continue;
          add_zero_functional(p, e, place(b, hb[c] - trace_product(hb[c], li.gamma()) * identity(di), dims, i));
        }
      LinearView rest{e.block, rest_structure(i),
                      [adj = e.adjoint, dims, i, di](const Matrix& a) { return adj(place(a, identity(di), dims, i)); },
                      e.trace_bound};
      add_min_cone(p, remove_at(locals, static_cast<size_t>(i)), rest);
      return;
    }
    if (li.kind() == SetKind::Incoherent) {
      const Matrix u = li.basis();
      for (const auto& b : hermitian_basis(dr))
        for (const auto& c : off_diagonal_units(di)) add_zero_functional(p, e, place(b, u * c * u.adjoint(), dims, i));
      const auto rest_locals = remove_at(locals, static_cast<size_t>(i));
      for (int k = 0; k < di; ++k) {
        const Matrix pk = basis_vector_projector(u, k);
        LinearView block{e.block, rest_structure(i),
                         [adj = e.adjoint, dims, i, pk](const Matrix& a) { return adj(place(a, pk, dims, i)); },
                         e.trace_bound};
        add_min_cone(p, rest_locals, block);
      }
      return;
    }
  }
  if (n == 2 && locals[0].kind() == SetKind::AllStates && locals[1].kind() == SetKind::AllStates &&
      small_ppt_dims(dims[0], dims[1])) {
    add_ppt_block(p, e, slot_structure(dims));
    return;
  }
  throw std::invalid_argument("min-composite has no cone representation");
}

}  // namespace

bool has_cone_representation(const FreeStateSet& set) {
  switch (set.kind()) {
    case SetKind::MaxComposite:
      return std::all_of(set.locals().begin(), set.locals().end(),
                         [](const FreeStateSet& l) { return has_cone_representation(l); });
    case SetKind::MinComposite:
      return min_plan_ok(flatten_min(set.locals()));
    default:
      return true;
  }
}

void add_cone_constraints(SdpProblem& p, const FreeStateSet& set, const LinearView& e) {
  const int d = set.dim();
  switch (set.kind()) {
    case SetKind::AllStates:
      return;
    case SetKind::Incoherent: {
      const Matrix& u = set.basis();
      for (const auto& b : off_diagonal_units(d)) add_zero_functional(p, e, u * b * u.adjoint());
      return;
    }
    case SetKind::Real: {
      const Matrix& u = set.basis();
      for (const auto& b : imaginary_units(d)) add_zero_functional(p, e, u * b * u.adjoint());
      return;
    }
    case SetKind::Singleton: {
      const auto hb = hermitian_basis(d);
      for (size_t k = 0; k < hb.size(); ++k) {
        if (k == static_cast<size_t>(d - 1)) continue;
        add_zero_functional(p, e, hb[k] - trace_product(hb[k], set.gamma()) * identity(d));
      }
      return;
    }
    case SetKind::Separable:
      add_ppt_block(p, e, set.structure());
      return;
    case SetKind::Hull: {
      std::vector<int> coeff;
      for (size_t k = 0; k < set.points().size(); ++k) coeff.push_back(p.add_block(1, e.trace_bound));
      for (const auto& b : hermitian_basis(d)) {
        const int c = p.add_constraint(0.0);
        p.add_term(c, e.block, e.adjoint(b));
        for (size_t k = 0; k < set.points().size(); ++k) {
          const double v = trace_product(b, set.points()[k]);
          if (std::abs(v) > 1e-15) p.add_term(c, coeff[k], Matrix::Constant(1, 1, Complex(-v, 0.0)));
        }
      }
      return;
    }
    case SetKind::MaxComposite: {
      const auto dims = slot_dims(set.locals());
      const int n = static_cast<int>(dims.size());
      for (int i = 0; i < n; ++i) {
        const auto& li = set.locals()[static_cast<size_t>(i)];
        const int dr = product_of(dims, i);
        LinearView marg{e.block, li.structure(),
                        [adj = e.adjoint, dims, i, dr](const Matrix& a) { return adj(place(identity(dr), a, dims, i)); },
                        e.trace_bound};
        add_cone_constraints(p, li, marg);
      }
      return;
    }
    case SetKind::MinComposite:
      add_min_cone(p, flatten_min(set.locals()), e);
      return;
  }
}

LmoResult sdp_linear_minimization(const FreeStateSet& set, const Matrix& g) {
  const int d = set.dim();
  SdpProblem p;
  const int x = p.add_block(d, 1.0);
  p.add_objective(x, hermitian_part(g));
  const int k = p.add_constraint(1.0);
  p.add_term(k, x, identity(d));
  add_cone_constraints(p, set, {x, set.structure(), [](const Matrix& a) { return a; }, 1.0});
  const auto sol = solve_sdp(p);
  LmoResult r;
  r.state = clip_to_state(sol.x[static_cast<size_t>(x)]);
  r.value = trace_product(g, r.state);
  r.lower_bound = std::min(r.value, sol.safe_dual_bound);
  r.certified = std::isfinite(sol.safe_dual_bound);
  return r;
}

// --- free operations ---------------------------------------------------------

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::SIO: return "sio";
    case OpKind::RealOps: return "real_ops";
    case OpKind::Unital: return "unital";
    case OpKind::AllOps: return "all_ops";
    case OpKind::RNG: return "rng";
    case OpKind::Lfocc: return "lfocc";
  }
  return "unknown";
}

FreeOpClass FreeOpClass::sio(const Matrix& basis) { return {OpKind::SIO, basis, nullptr, {}}; }
FreeOpClass FreeOpClass::real_ops(const Matrix& basis) { return {OpKind::RealOps, basis, nullptr, {}}; }
FreeOpClass FreeOpClass::unital() { return {OpKind::Unital, Matrix(), nullptr, {}}; }
FreeOpClass FreeOpClass::all_ops() { return {OpKind::AllOps, Matrix(), nullptr, {}}; }
FreeOpClass FreeOpClass::rng(const FreeStateSet& set) {
  return {OpKind::RNG, Matrix(), std::make_shared<const FreeStateSet>(set), {}};
}
FreeOpClass FreeOpClass::lfocc(std::vector<std::pair<std::string, FreeOpClass>> per_party) {
  return {OpKind::Lfocc, Matrix(), nullptr, std::move(per_party)};
}

std::string FreeOpClass::describe() const {
  std::string s = to_string(kind);
  if (kind == OpKind::RNG && set) s += "(" + set->describe() + ")";
  if (kind == OpKind::Lfocc) {
    s += "[";
    for (size_t i = 0; i < locals.size(); ++i) s += (i ? ", " : "") + locals[i].first + ":" + locals[i].second.describe();
    s += "]";
  }
  return s;
}

bool is_sio_kraus(const Matrix& k, double tol) {
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    int nz = 0;
    for (Eigen::Index c = 0; c < k.cols(); ++c) nz += std::abs(k(r, c)) > tol;
    if (nz > 1) return false;
  }
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    int nz = 0;
    for (Eigen::Index r = 0; r < k.rows(); ++r) nz += std::abs(k(r, c)) > tol;
    if (nz > 1) return false;
  }
  return true;
}

namespace {

Matrix in_basis(const Matrix& k, const Matrix& basis) {
  if (basis.size() == 0 || k.rows() != k.cols() || basis.rows() != k.rows()) return k;
  return basis.adjoint() * k * basis;
}

}  // namespace

OpCheck check_op_class(const KrausChannel& channel, const FreeOpClass& cls, double tol, uint64_t seed, int samples) {
  OpCheck out;
  switch (cls.kind) {
    case OpKind::AllOps:
      out.passed = true;
      out.mode = "trivial";
      return out;
    case OpKind::SIO:
      out.mode = "normal-form";
      out.note = "tests the supplied Kraus representation";
      out.checked = static_cast<int>(channel.kraus().size());
      out.passed = std::all_of(channel.kraus().begin(), channel.kraus().end(),
                               [&](const Matrix& k) { return is_sio_kraus(in_basis(k, cls.basis), tol); });
      return out;
    case OpKind::RealOps:
      out.mode = "normal-form";
      out.note = "tests the supplied Kraus representation";
      out.checked = static_cast<int>(channel.kraus().size());
      out.passed = std::all_of(channel.kraus().begin(), channel.kraus().end(),
                               [&](const Matrix& k) { return in_basis(k, cls.basis).imag().cwiseAbs().maxCoeff() <= tol; });
      return out;
    case OpKind::Unital:
      out.mode = "unitality";
      out.checked = 1;
      out.passed = channel.in_dim() == channel.out_dim() && is_unital(channel, std::max(tol, 1e-9));
      if (!out.passed) out.counterexample = identity(channel.in_dim()) / static_cast<double>(channel.in_dim());
      return out;
    case OpKind::RNG: {
      if (!cls.set) throw std::invalid_argument("RNG class without a state set");
      const auto& s = *cls.set;
      if (channel.in_dim() != s.dim() || channel.out_dim() != s.dim())
        throw std::invalid_argument("RNG check: channel and set dimensions differ");
      Rng rng(seed);
      bool exhaustive = false;
      const auto states = verification_states(s, rng, samples, &exhaustive);
      out.checked = static_cast<int>(states.size());
      out.mode = exhaustive ? "exhaustive" : "verified on " + std::to_string(states.size()) + " states";
      out.passed = true;
      for (const auto& mu : states) {
        if (!contains(s, channel.apply(mu), std::max(tol, 1e-8))) {
          out.passed = false;
          out.counterexample = mu;
          break;
        }
      }
      return out;
    }
    case OpKind::Lfocc:
      out.mode = "unsupported";
      out.note = "LFOCC membership is decided on protocols; use check_protocol_class";
      out.passed = false;
      return out;
  }
  return out;
}

bool op_in_class(const KrausChannel& channel, const FreeOpClass& cls, double tol) {
  return check_op_class(channel, cls, tol).passed;
}

OpCheck check_protocol_class(const LfoccProtocol& protocol, const FreeOpClass& cls, double tol) {
  if (cls.kind != OpKind::Lfocc) throw std::invalid_argument("check_protocol_class needs an LFOCC class");
  OpCheck out;
  out.mode = "per-round";
  out.passed = true;
  for (size_t r = 0; r < protocol.rounds().size(); ++r) {
    const auto& round = protocol.rounds()[r];
    const FreeOpClass* local = nullptr;
    for (const auto& [label, c] : cls.locals)
      if (label == round.party) local = &c;
    if (!local) throw std::invalid_argument("no local class for party '" + round.party + "'");
    const int d = static_cast<int>(protocol.structure().parties()[static_cast<size_t>(protocol.structure().index_of(round.party))].dim);
    for (const auto& h : protocol.histories(r)) {
      const KrausChannel fam(protocol.family(r, h), TensorStructure::single(d), TensorStructure::single(d));
      ++out.checked;
      const auto c = check_op_class(fam, *local, tol);
      if (!c.passed) {
        out.passed = false;
        out.note = "round " + std::to_string(r) + ", history '" + h + "' fails " + local->describe();
        return out;
      }
    }
  }
  return out;
}

}  // namespace rescomp

namespace rescomp {

namespace {

KrausChannel random_sio(int dim, const Matrix& basis, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::normal_distribution<double> gauss;
  const int m = count(rng);
  std::vector<std::vector<int>> perms(static_cast<size_t>(m));
  std::vector<Matrix> coeff(static_cast<size_t>(m), Matrix::Zero(dim, 1));
  for (auto& p : perms) {
    p.resize(static_cast<size_t>(dim));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
  }
  for (int i = 0; i < dim; ++i) {
    double norm = 0.0;
    for (int j = 0; j < m; ++j) {
      const Complex c(gauss(rng), gauss(rng));
      coeff[static_cast<size_t>(j)](i, 0) = c;
      norm += std::norm(c);
    }
    for (int j = 0; j < m; ++j) coeff[static_cast<size_t>(j)](i, 0) /= std::sqrt(norm);
  }
  const Matrix u = basis.size() == 0 ? identity(dim) : basis;
  std::vector<Matrix> ks;
  for (int j = 0; j < m; ++j) {
    Matrix k = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) k(perms[static_cast<size_t>(j)][static_cast<size_t>(i)], i) = coeff[static_cast<size_t>(j)](i, 0);
    ks.push_back(u * k * u.adjoint());
  }
  const auto s = TensorStructure::single(dim);
  return KrausChannel(std::move(ks), s, s);
}

/// Kraus operators from a random isometry dim -> m*dim, real when requested.
KrausChannel random_stinespring(int dim, int m, bool real_only, const Matrix& basis, Rng& rng) {
  std::normal_distribution<double> gauss;
  Matrix g(m * dim, dim);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(gauss(rng), real_only ? 0.0 : gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix v = qr.householderQ() * Matrix::Identity(m * dim, dim);
  const Matrix u = basis.size() == 0 ? identity(dim) : basis;
  std::vector<Matrix> ks;
  for (int j = 0; j < m; ++j) {
    Matrix k = v.block(j * dim, 0, dim, dim);
    if (real_only) k = k.real().cast<Complex>();
    ks.push_back(u * k * u.adjoint());
  }
  const auto s = TensorStructure::single(dim);
  return KrausChannel(std::move(ks), s, s, 1e-8);
}

KrausChannel random_unital(int dim, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  const int m = count(rng);
  std::vector<KrausChannel> us;
  const auto s = TensorStructure::single(dim);
  for (int j = 0; j < m; ++j) us.push_back(KrausChannel::unitary(random_unitary(dim, rng), s));
  return mixture(us, random_probabilities(m, rng));
}

}  // namespace

KrausChannel random_free_op(const FreeOpClass& cls, int dim, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  const auto s = TensorStructure::single(dim);
  switch (cls.kind) {
    case OpKind::SIO:
      return random_sio(dim, cls.basis, rng);
    case OpKind::RealOps:
      return random_stinespring(dim, count(rng), true, cls.basis, rng);
    case OpKind::Unital:
      return random_unital(dim, rng);
    case OpKind::AllOps:
      return random_stinespring(dim, count(rng), false, Matrix(), rng);
    case OpKind::RNG: {
      if (!cls.set || cls.set->dim() != dim) throw std::invalid_argument("RNG class dimension mismatch");
      const auto& set = *cls.set;
      const auto replace = KrausChannel::replacement(s, DensityOperator(random_free_state(set, rng), s));
      std::optional<KrausChannel> native;
      if (set.kind() == SetKind::Incoherent) native = random_sio(dim, set.basis(), rng);
      if (set.kind() == SetKind::Real) native = random_stinespring(dim, count(rng), true, set.basis(), rng);
      if (set.kind() == SetKind::AllStates) native = random_stinespring(dim, count(rng), false, Matrix(), rng);
      if (set.kind() == SetKind::Singleton &&
          (set.gamma() - identity(dim) / static_cast<double>(dim)).cwiseAbs().maxCoeff() < 1e-12)
        native = random_unital(dim, rng);
      if (!native) return replace;
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double w = u(rng);
      return mixture({*native, replace}, {w, 1.0 - w});
    }
    case OpKind::Lfocc:
      break;
  }
  throw std::invalid_argument("cannot sample operations of class " + cls.describe());
}

}  // namespace rescomp
