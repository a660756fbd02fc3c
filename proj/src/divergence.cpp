#include "rescomp/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescomp {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_state_dims(const Matrix& rho, const FreeStateSet& set) {
  if (rho.rows() != set.dim() || rho.cols() != set.dim())
    throw std::invalid_argument("state and free set have different dimensions");
  validate_density(rho, 1e-8);
}

/// Orthonormal basis (columns) of the support of a PSD matrix.
Matrix support_isometry(const Matrix& m) {
  const auto e = eig_hermitian(m);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > kSupportTol) cols.push_back(i);
  Matrix v(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = e.vectors.col(cols[k]);
  return v;
}

/// Weight of rho outside the range of v.
double leaked_weight(const Matrix& rho, const Matrix& v) {
  return 1.0 - (v.adjoint() * rho * v).trace().real();
}

DivergenceResult infinite_result(const std::string& method, const std::string& note) {
  DivergenceResult r;
  r.value = r.lower_bound = r.upper_bound = kInfinity;
  r.converged = r.certified = true;
  r.method = method;
  r.note = note;
  return r;
}

DivergenceResult exact_result(double v, const Matrix& opt, const std::string& method) {
  DivergenceResult r;
  r.value = r.lower_bound = r.upper_bound = v;
  r.converged = r.certified = true;
  r.method = method;
  r.optimizer = opt;
  return r;
}

/// Product-basis sets that a min-composite of incoherent or singleton locals collapses to.
std::optional<FreeStateSet> collapsed(const FreeStateSet& set) {
  if (set.kind() != SetKind::MinComposite) return std::nullopt;
  std::vector<FreeStateSet> flat;
  std::function<void(const FreeStateSet&)> walk = [&](const FreeStateSet& s) {
    if (s.kind() == SetKind::MinComposite) {
      for (const auto& l : s.locals()) walk(l);
    } else {
      flat.push_back(s);
    }
  };
  walk(set);
  const bool all_inc = std::all_of(flat.begin(), flat.end(), [](const FreeStateSet& s) { return s.kind() == SetKind::Incoherent; });
  const bool all_sing = std::all_of(flat.begin(), flat.end(), [](const FreeStateSet& s) { return s.kind() == SetKind::Singleton; });
  if (!all_inc && !all_sing) return std::nullopt;
  Matrix m = Matrix::Identity(1, 1);
  for (const auto& s : flat) m = kron(m, all_inc ? s.basis() : s.gamma());
  if (all_inc) return FreeStateSet::incoherent(set.dim(), m);
  return FreeStateSet::singleton(DensityOperator::trusted(m, set.structure()));
}

/// Divided differences of log2 used for the derivative of the matrix logarithm.
double log2_divided_difference(double a, double b) {
  a = std::max(a, kEigClamp);
  b = std::max(b, kEigClamp);
  if (std::abs(a - b) <= 1e-12 * std::max(a, b)) return 1.0 / (a * kLn2);
  return (std::log2(a) - std::log2(b)) / (a - b);
}

}  // namespace

// --- relative entropy --------------------------------------------------------

DivergenceResult rel_entropy_of_resource(const Matrix& rho_in, const FreeStateSet& set, const RelEntropyOptions& options) {
  check_state_dims(rho_in, set);
  const Matrix rho = hermitian_part(rho_in);
  const Matrix ref = reference_state(set);
  const Matrix v = support_isometry(ref);
  if (leaked_weight(rho, v) > kSupportTol)
    return infinite_result("support", "support of the state is not covered by any free state");

  if (!options.force_iterative) {
    const auto simple = set.has_closed_form_closest() ? std::optional<FreeStateSet>(set) : collapsed(set);
    if (simple) {
      const auto c = closest_free_state(*simple, rho);
      return exact_result(c.divergence, c.state, "closed-form");
    }
  }

  Rng rng(options.seed);
  const Matrix rho_r = v.adjoint() * rho * v;

  FwProblem prob;
  prob.value = [&](const Matrix& sigma) {
    const Matrix s = v.adjoint() * sigma * v;
    return relative_entropy(rho_r, hermitian_part(s));
  };
  prob.gradient = [&](const Matrix& sigma) {
    const auto e = eig_hermitian(hermitian_part(v.adjoint() * sigma * v));
    const Matrix rt = e.vectors.adjoint() * rho_r * e.vectors;
    Matrix g(rt.rows(), rt.cols());
    for (Eigen::Index i = 0; i < rt.rows(); ++i)
      for (Eigen::Index j = 0; j < rt.cols(); ++j) g(i, j) = -rt(i, j) * log2_divided_difference(e.values(i), e.values(j));
    return Matrix(v * (e.vectors * g * e.vectors.adjoint()) * v.adjoint());
  };
  prob.lmo = [&](const Matrix& g) { return linear_minimization_oracle(set, g, rng, options.lmo); };

  FwOptions fw;
  fw.gap = options.gap;
  fw.max_iterations = options.max_iterations;
  fw.corrective_steps = 20;
  if (has_cone_representation(set)) {
    fw.certify_linear_min = [&](const Matrix& g) { return sdp_linear_minimization(set, g).lower_bound; };
  }

  // Interior start: a point toward the state mixed with the reference.
  const double delta = 1e-3;
  const auto first = linear_minimization_oracle(set, -rho, rng, options.lmo);
  const auto res = frank_wolfe(prob, {{first.state, 1.0 - delta}, {ref, delta}}, fw);

  DivergenceResult out;
  out.value = res.value;
  out.upper_bound = res.value;
  out.lower_bound = std::max(0.0, std::min(res.lower_bound, res.value));
  out.iterations = res.iterations;
  out.converged = res.converged;
  out.certified = res.certified;
  out.method = "frank-wolfe";
  out.optimizer = res.x;
  if (res.max_restarts > 0) out.note = "see-saw oracle with " + std::to_string(res.max_restarts) + " restarts";
  return out;
}

DivergenceResult rel_entropy_of_resource(const DensityOperator& rho, const FreeStateSet& set, const RelEntropyOptions& options) {
  return rel_entropy_of_resource(rho.matrix(), set, options);
}

// --- max-relative entropy ----------------------------------------------------

namespace {

/// log2 lambda_max(gamma^{-1/2} rho gamma^{-1/2}) on the support of gamma.
double dmax_pair(const Matrix& rho, const Matrix& sigma) {
  const auto e = eig_hermitian(sigma);
  Matrix inv_sqrt = Matrix::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i)
    if (e.values(i) > kSupportTol) inv_sqrt += (1.0 / std::sqrt(e.values(i))) * projector(e.vectors.col(i));
  return std::log2(max_eigenvalue(hermitian_part(inv_sqrt * rho * inv_sqrt)));
}

DivergenceResult dmax_bisection(const Matrix& rho, const FreeStateSet& set, double log_hi, const DmaxOptions& options) {
  Rng rng(options.seed);
  // Feasibility of lambda: max over sigma of lambda_min(lambda sigma - rho) >= 0,
  // a concave maximization handled by a supergradient Frank-Wolfe scheme.
  Matrix best_sigma = reference_state(set);
  const auto feasible = [&](double lambda) {
    Matrix sigma = best_sigma;
    double best = min_eigenvalue(lambda * sigma - rho);
    for (int it = 0; it < 400 && best < 0; ++it) {
      const auto e = eig_hermitian(hermitian_part(lambda * sigma - rho));
      const Matrix g = -projector(e.vectors.col(0));
      const auto s = linear_minimization_oracle(set, g, rng);
      const double t = 2.0 / (it + 3.0);
      sigma = (1.0 - t) * sigma + t * s.state;
      const double val = min_eigenvalue(lambda * sigma - rho);
      if (val > best) {
        best = val;
        best_sigma = sigma;
      }
    }
    return best >= 0;
  };
  double lo = 0.0, hi = log_hi;
  int iters = 0;
  while (hi - lo > options.tol && iters < 60) {
    ++iters;
    const double mid = 0.5 * (lo + hi);
    if (feasible(std::exp2(mid))) hi = mid;
    else lo = mid;
  }
  DivergenceResult r;
  r.value = r.upper_bound = hi;
  r.lower_bound = lo;
  r.iterations = iters;
  r.converged = true;
  r.certified = false;
  r.method = "bisection";
  r.optimizer = best_sigma;
  r.note = "lower end of the bracket comes from a heuristic feasibility search";
  return r;
}

}  // namespace

DivergenceResult dmax(const Matrix& rho_in, const FreeStateSet& set, const DmaxOptions& options) {
  check_state_dims(rho_in, set);
  const Matrix rho = hermitian_part(rho_in);
  const Matrix ref = reference_state(set);
  if (leaked_weight(rho, support_isometry(ref)) > kSupportTol)
    return infinite_result("support", "support of the state is not covered by any free state");
  if (set.kind() == SetKind::Singleton) return exact_result(dmax_pair(rho, set.gamma()), set.gamma(), "closed-form");
  if (auto c = collapsed(set); c && c->kind() == SetKind::Singleton)
    return exact_result(dmax_pair(rho, c->gamma()), c->gamma(), "closed-form");

  const double log_hi = std::max(0.0, dmax_pair(rho, ref));
  if (options.force_bisection || !has_cone_representation(set)) return dmax_bisection(rho, set, log_hi + 1e-9, options);

  // min Tr tau subject to tau in cone(S), tau - W = rho, W >= 0.
  const int d = set.dim();
  const double bound = 2.0 * std::exp2(log_hi) + 1.0;
  SdpProblem p;
  const int tau = p.add_block(d, bound);
  const int w = p.add_block(d, bound);
  p.add_objective(tau, identity(d));
  for (const auto& b : hermitian_basis(d)) {
    const int c = p.add_constraint(trace_product(b, rho));
    p.add_term(c, tau, b);
    p.add_term(c, w, b, -1.0);
  }
  add_cone_constraints(p, set, {tau, set.structure(), [](const Matrix& a) { return a; }, bound});
  const auto sol = solve_sdp(p);
  const Matrix t = hermitian_part(sol.x[static_cast<size_t>(tau)]);
  const double tr = t.trace().real();
  DivergenceResult r;
  r.method = "sdp";
  r.iterations = sol.iterations;
  r.optimizer = t / tr;
  // The primal point may violate the constraints slightly; evaluate it exactly.
  const double achieved = dmax_pair(rho, r.optimizer);
  r.upper_bound = std::min(log_hi, std::max(achieved, std::log2(std::max(tr, 1.0))));
  r.value = r.upper_bound;
  r.lower_bound = std::isfinite(sol.safe_dual_bound) ? std::log2(std::max(sol.safe_dual_bound, 1.0)) : 0.0;
  r.lower_bound = std::min(r.lower_bound, r.value);
  r.certified = std::isfinite(sol.safe_dual_bound);
  r.converged = sol.converged && r.upper_bound - r.lower_bound <= std::max(options.tol, 1e-6);
  return r;
}

// --- hypothesis testing ------------------------------------------------------

double alpha_value(const FreeStateSet& set, const Matrix& p, uint64_t seed) {
  Rng rng(seed);
  LmoOptions o;
  o.certify = true;
  const auto s = support_function(set, hermitian_part(p), rng, o);
  return s.exact ? s.upper_bound : s.value;
}

namespace {

using LinearMap = std::function<Matrix(const Matrix&)>;

Matrix class_basis(const HypothesisOptions& o, int d) {
  return o.basis.size() == 0 ? identity(d) : o.basis;
}

/// Smallest admissible test that accepts rho with certainty.
Matrix minimal_certain_test(const Matrix& rho, const HypothesisOptions& o) {
  const int d = static_cast<int>(rho.rows());
  const Matrix u = class_basis(o, d);
  switch (o.tests) {
    case TestClass::All: {
      const Matrix v = support_isometry(rho);
      return v * v.adjoint();
    }
    case TestClass::Diagonal: {
      const Matrix r = u.adjoint() * rho * u;
      Matrix p = Matrix::Zero(d, d);
      for (int k = 0; k < d; ++k)
        if (r(k, k).real() > kSupportTol) p(k, k) = 1.0;
      return u * p * u.adjoint();
    }
    case TestClass::Real: {
      const Matrix r = u.adjoint() * rho * u;
      const Matrix v = support_isometry(hermitian_part(r + r.conjugate()));
      return u * (v * v.adjoint()) * u.adjoint();
    }
  }
  return identity(d);
}

/// Projects a Hermitian matrix onto the admissible test class and clips its spectrum to [0, 1].
Matrix admissible(const Matrix& p, const HypothesisOptions& o) {
  const int d = static_cast<int>(p.rows());
  const Matrix u = class_basis(o, d);
  Matrix q = u.adjoint() * hermitian_part(p) * u;
  if (o.tests == TestClass::Diagonal) q = Matrix(q.diagonal().real().cast<Complex>().asDiagonal());
  if (o.tests == TestClass::Real) q = q.real().cast<Complex>();
  const auto e = eig_hermitian(q);
  q = spectral_map(e, [](double x) { return std::clamp(x, 0.0, 1.0); });
  if (o.tests == TestClass::Real) q = q.real().cast<Complex>();
  if (o.tests == TestClass::Diagonal) q = Matrix(q.diagonal().real().cast<Complex>().asDiagonal());
  return hermitian_part(u * q * u.adjoint());
}

/// Adds exact constraints alpha(adjoint(P)) <= epsilon when the set admits
/// them; `forward` maps the set's space to the test space. Returns false when
/// no exact description is available.
bool add_alpha_constraints(SdpProblem& prob, int pb, const FreeStateSet& set, const LinearMap& forward, double eps) {
  const int d = set.dim();
  if (auto pts = extreme_points(set); pts && pts->size() <= 64) {
    for (const auto& x : *pts) {
      const int s = prob.add_block(1, 1.0);
      const int c = prob.add_constraint(eps);
      prob.add_term(c, pb, forward(x));
      prob.add_term(c, s, Matrix::Identity(1, 1));
    }
    return true;
  }
  const auto hb = hermitian_basis(d);
  switch (set.kind()) {
    case SetKind::AllStates: {
      // eps I - adjoint(P) = R with R >= 0.
      const int r = prob.add_block(d, d * eps);
      for (const auto& b : hb) {
        const int c = prob.add_constraint(eps * b.trace().real());
        prob.add_term(c, pb, forward(b));
        prob.add_term(c, r, b);
      }
      return true;
    }
    case SetKind::Real: {
      const int r = prob.add_block(d, d * eps);
      const Matrix& u = set.basis();
      for (size_t k = 0; k < hb.size(); ++k) {
        const bool symmetric = k < static_cast<size_t>(d) || (k - static_cast<size_t>(d)) % 2 == 0;
        if (!symmetric) continue;
        const int c = prob.add_constraint(eps * hb[k].trace().real());
        prob.add_term(c, pb, forward(u * hb[k] * u.adjoint()));
        prob.add_term(c, r, hb[k]);
      }
      return true;
    }
    case SetKind::Separable: {
      // eps I - adjoint(P) = A + PT(B) with A, B >= 0.
      const int a = prob.add_block(d, 2.0 * d);
      const int b = prob.add_block(d, 2.0 * d);
      for (const auto& h : hb) {
        const int c = prob.add_constraint(eps * h.trace().real());
        prob.add_term(c, pb, forward(h));
        prob.add_term(c, a, h);
        prob.add_term(c, b, partial_transpose(h, set.structure(), 1));
      }
      return true;
    }
    default:
      return false;
  }
}

void add_class_constraints(SdpProblem& prob, int pb, const HypothesisOptions& o, int d) {
  if (o.tests == TestClass::All) return;
  const Matrix u = class_basis(o, d);
  const auto hb = hermitian_basis(d);
  for (size_t k = static_cast<size_t>(d); k < hb.size(); ++k) {
    const bool imaginary = (k - static_cast<size_t>(d)) % 2 == 1;
    if (o.tests == TestClass::Real && !imaginary) continue;
    const int c = prob.add_constraint(0.0);
    prob.add_term(c, pb, u * hb[k] * u.adjoint());
  }
}

double neg_log2_beta(double beta) { return beta <= 1e-12 ? kInfinity : -std::log2(beta); }

/// Core solver: tests act on `target`; the type-I error of a test P is the
/// supremum of Tr sigma adjoint(P) over the set.
DivergenceResult test_optimization(const Matrix& target, const FreeStateSet& set, const LinearMap& forward,
                                   const LinearMap& adjoint, double epsilon, const HypothesisOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const int d = static_cast<int>(target.rows());
  const auto alpha = [&](const Matrix& p) { return alpha_value(set, adjoint(p), options.seed); };

  // Zero type-II error is possible iff the smallest certain test is admissible.
  const Matrix pi = minimal_certain_test(target, options);
  if (alpha(pi) <= epsilon + std::max(options.tol, 1e-9)) {
    auto r = infinite_result("support", "a test accepting the state with certainty meets the type-I budget");
    r.optimizer = pi;
    return r;
  }

  const auto finish = [&](Matrix p, double relax_max, int iters, const std::string& method, bool certified) {
    p = admissible(p, options);
    const double a = alpha(p);
    if (a > epsilon) p *= epsilon / a;
    const double accept = std::min(1.0, trace_product(target, p));
    DivergenceResult r;
    r.method = method;
    r.iterations = iters;
    r.optimizer = p;
    r.value = r.lower_bound = neg_log2_beta(1.0 - accept);
    r.upper_bound = neg_log2_beta(1.0 - std::max(accept, std::min(relax_max, 1.0)));
    r.certified = certified;
    r.converged = r.upper_bound - r.lower_bound <= 1e-6 || (std::isinf(r.upper_bound) && std::isinf(r.lower_bound));
    return r;
  };

  const auto base_problem = [&](SdpProblem& prob) {
    const int pb = prob.add_block(d, d);
    const int qb = prob.add_block(d, d);
    prob.add_objective(pb, -target);
    for (const auto& b : hermitian_basis(d)) {
      const int c = prob.add_constraint(b.trace().real());
      prob.add_term(c, pb, b);
      prob.add_term(c, qb, b);
    }
    add_class_constraints(prob, pb, options, d);
    return pb;
  };

  SdpOptions sdp_opt;
  sdp_opt.tolerance = std::min(options.tol, 1e-9);
  {
    SdpProblem prob;
    const int pb = base_problem(prob);
    if (add_alpha_constraints(prob, pb, set, forward, epsilon)) {
      const auto sol = solve_sdp(prob, sdp_opt);
      const double relax = std::isfinite(sol.safe_dual_bound) ? -sol.safe_dual_bound : 1.0;
      return finish(sol.x[static_cast<size_t>(pb)], relax, sol.iterations, "sdp", std::isfinite(sol.safe_dual_bound));
    }
  }

  // Cutting planes: relax the type-I constraint to finitely many free states.
  Rng rng(options.seed);
  std::vector<Matrix> cuts{reference_state(set)};
  Matrix p_best = epsilon * identity(d);
  double relax = 1.0;
  bool certified = true;
  int it = 0;
  for (; it < options.max_cuts; ++it) {
    SdpProblem prob;
    const int pb = base_problem(prob);
    for (const auto& x : cuts) {
      const int s = prob.add_block(1, 1.0);
      const int c = prob.add_constraint(epsilon);
      prob.add_term(c, pb, forward(x));
      prob.add_term(c, s, Matrix::Identity(1, 1));
    }
    const auto sol = solve_sdp(prob, sdp_opt);
    if (std::isfinite(sol.safe_dual_bound)) relax = std::min(relax, -sol.safe_dual_bound);
    const Matrix p = hermitian_part(sol.x[static_cast<size_t>(pb)]);
    LmoOptions lo;
    lo.certify = true;
    const auto sv = support_function(set, adjoint(p), rng, lo);
    certified = certified && sv.exact;
    p_best = p;
    if (sv.value <= epsilon + options.tol) break;
    cuts.push_back(sv.argmax);
  }
  auto r = finish(p_best, relax, it + 1, "cutting-plane", certified);
  if (!certified) r.note = "type-I supremum evaluated by a heuristic oracle";
  return r;
}

}  // namespace

DivergenceResult hypothesis_testing(const Matrix& rho_in, const FreeStateSet& set, double epsilon, const HypothesisOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  check_state_dims(rho_in, set);
  const LinearMap id = [](const Matrix& m) { return m; };
  return test_optimization(hermitian_part(rho_in), set, id, id, epsilon, options);
}

DivergenceResult hypothesis_testing_through(const Matrix& rho_in, const FreeStateSet& set, const KrausChannel& channel,
                                            double epsilon, const HypothesisOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  check_state_dims(rho_in, set);
  if (channel.in_dim() != set.dim()) throw std::invalid_argument("preprocessing input does not match the free set");
  const LinearMap fwd = [&](const Matrix& m) { return hermitian_part(channel.apply(m)); };
  const LinearMap adj = [&](const Matrix& m) { return hermitian_part(channel.apply_adjoint(m)); };
  return test_optimization(fwd(hermitian_part(rho_in)), set, fwd, adj, epsilon, options);
}

// --- regularization ----------------------------------------------------------

CopySet copy_set(const FreeStateSet& set, int n) {
  if (n < 1) throw std::invalid_argument("copy count must be positive");
  const int k = static_cast<int>(set.structure().size());
  std::vector<int> ident(static_cast<size_t>(n * k));
  for (int i = 0; i < n * k; ++i) ident[static_cast<size_t>(i)] = i;
  const auto power = [n](const Matrix& m) {
    Matrix out = Matrix::Identity(1, 1);
    for (int c = 0; c < n; ++c) out = kron(out, m);
    return out;
  };
  const int dn = static_cast<int>(std::lround(std::pow(set.dim(), n)));
  if (dn > kMaxDim) throw std::invalid_argument("n-copy space exceeds the dimension cap");
  switch (set.kind()) {
    case SetKind::Incoherent:
      return {FreeStateSet::incoherent(dn, power(set.basis())), ident};
    case SetKind::Real:
      return {FreeStateSet::real(dn, power(set.basis())), ident};
    case SetKind::AllStates:
      return {FreeStateSet::all_states(dn), ident};
    case SetKind::Singleton:
      return {FreeStateSet::singleton(DensityOperator::trusted(power(set.gamma()), TensorStructure::single(dn))), ident};
    case SetKind::Hull: {
      std::vector<Matrix> pts{Matrix::Identity(1, 1)};
      for (int c = 0; c < n; ++c) {
        std::vector<Matrix> next;
        for (const auto& a : pts)
          for (const auto& b : set.points()) next.push_back(kron(a, b));
        pts = std::move(next);
      }
      return {FreeStateSet::hull(pts), ident};
    }
    case SetKind::Separable: {
      const auto dims = set.structure().dims();
      std::vector<int> order;
      for (int p = 0; p < 2; ++p)
        for (int c = 0; c < n; ++c) order.push_back(c * 2 + p);
      const auto pw = [n](int x) { return static_cast<int>(std::lround(std::pow(x, n))); };
      return {FreeStateSet::min_composite({FreeStateSet::all_states(pw(dims[0])), FreeStateSet::all_states(pw(dims[1]))}), order};
    }
    case SetKind::MinComposite:
    case SetKind::MaxComposite: {
      std::vector<FreeStateSet> locals;
      std::vector<int> order;
      int offset = 0;
      for (size_t i = 0; i < set.locals().size(); ++i) {
        const auto sub = copy_set(set.locals()[i], n);
        const int m = set.local_party_counts()[i];
        locals.push_back(sub.set);
        for (int j : sub.order) {
          const int c = j / m, q = j % m;
          order.push_back(c * k + offset + q);
        }
        offset += m;
      }
      if (set.kind() == SetKind::MinComposite) return {FreeStateSet::min_composite(locals), order};
      return {FreeStateSet::max_composite(locals), order};
    }
  }
  throw std::invalid_argument("unsupported set kind");
}

DivergenceResult regularized_rel_entropy(const Matrix& rho, const FreeStateSet& set, Additivity mode, int n,
                                         const RelEntropyOptions& options) {
  switch (mode) {
    case Additivity::KnownAdditive: {
      const auto k = set.kind();
      if (k != SetKind::Incoherent && k != SetKind::Singleton && k != SetKind::Real && !collapsed(set))
        throw std::invalid_argument("additivity is not known for " + set.describe());
      auto r = rel_entropy_of_resource(rho, set, options);
      r.note = "single-copy value; additive set";
      return r;
    }
    case Additivity::AssertedAdditive: {
      auto r = rel_entropy_of_resource(rho, set, options);
      r.note = "single-copy value; additivity asserted by the caller";
      return r;
    }
    case Additivity::EvaluateN: {
      if (n < 1 || n > 2) throw std::invalid_argument("evaluate-n supports n in {1, 2}");
      check_state_dims(rho, set);
      if (n == 1) return rel_entropy_of_resource(rho, set, options);
      const auto cs = copy_set(set, n);
      std::vector<Party> parties;
      for (int c = 0; c < n; ++c)
        for (const auto& p : set.structure().parties()) parties.push_back({p.label + "#" + std::to_string(c), p.dim});
      const Matrix big = permute(kron(rho, rho), TensorStructure(parties), cs.order);
      auto r = rel_entropy_of_resource(big, cs.set, options);
      r.value /= n;
      r.lower_bound /= n;
      r.upper_bound /= n;
      r.certified = false;
      r.note = "two-copy rate; an upper estimate of the regularized value";
      return r;
    }
  }
  throw std::invalid_argument("unknown additivity mode");
}

}  // namespace rescomp
