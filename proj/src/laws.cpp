#include "rescomp/laws.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rescomp {

std::string to_string(Verdict v) { return v == Verdict::Forbidden ? "FORBIDDEN" : "NOT-EXCLUDED"; }

namespace {

void require_dim(const Matrix& m, const FreeStateSet& set, const char* what) {
  if (m.rows() != set.dim())
    throw std::invalid_argument(std::string(what) + " has dimension " + std::to_string(m.rows()) + ", the set " +
                                std::to_string(set.dim()));
}

BoundReport compare(DivergenceResult lhs, DivergenceResult rhs) {
  BoundReport r;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.verdict = r.lhs.upper_bound < r.rhs.lower_bound ? Verdict::Forbidden : Verdict::NotExcluded;
  if (r.verdict == Verdict::NotExcluded && r.lhs.value < r.rhs.value)
    r.note = "values are ordered against the bound but the brackets overlap";
  return r;
}

/// Party indices occupied by each local inside the joint structure.
std::vector<std::vector<int>> party_groups(const FreeStateSet& joint) {
  std::vector<std::vector<int>> out;
  int next = 0;
  for (int count : joint.local_party_counts()) {
    std::vector<int> g(static_cast<size_t>(count));
    std::iota(g.begin(), g.end(), next);
    next += count;
    out.push_back(std::move(g));
  }
  return out;
}

double offdiagonal_norm(const Matrix& m, const FreeStateSet& set) {
  Matrix r = set.has_default_basis() ? m : Matrix(set.basis().adjoint() * m * set.basis());
  r.diagonal().setZero();
  return r.norm();
}

}  // namespace

BoundReport single_shot_verdict(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<FreeStateSet>& locals, const RelEntropyOptions& options) {
  const auto lo = smin(locals);
  const auto hi = smax(locals);
  require_dim(rho.matrix(), lo, "rho");
  require_dim(sigma.matrix(), hi, "sigma");
  return compare(rel_entropy_of_resource(rho.matrix(), lo, options), rel_entropy_of_resource(sigma.matrix(), hi, options));
}

BoundReport conversion_verdict(const DensityOperator& rho1, const FreeStateSet& s1, const DensityOperator& rho2,
                               const FreeStateSet& s2, const RelEntropyOptions& options) {
  require_dim(rho1.matrix(), s1, "rho1");
  require_dim(rho2.matrix(), s2, "rho2");
  return compare(rel_entropy_of_resource(rho1.matrix(), s1, options), rel_entropy_of_resource(rho2.matrix(), s2, options));
}

ReductionReport uncorrelated_reduction(const DensityOperator& rho, const std::vector<FreeStateSet>& locals,
                                       int resourceful, const RelEntropyOptions& options) {
  const auto lo = smin(locals);
  const auto hi = smax(locals);
  require_dim(rho.matrix(), lo, "rho");
  if (resourceful < 0 || resourceful >= static_cast<int>(locals.size()))
    throw std::invalid_argument("resourceful party index out of range");

  const auto groups = party_groups(lo);
  std::vector<Matrix> factors;
  for (const auto& g : groups) factors.push_back(hermitian_part(partial_trace(rho.matrix(), lo.structure(), g)));
  Matrix product = factors.front();
  for (size_t i = 1; i < factors.size(); ++i) product = kron(product, factors[i]);
  if (trace_norm_distance(product, rho.matrix()) > 1e-8)
    throw std::invalid_argument("uncorrelated_reduction: input is not a product across the locals");
  for (size_t i = 0; i < locals.size(); ++i) {
    if (static_cast<int>(i) == resourceful) continue;
    if (!contains(locals[i], factors[i], 1e-8))
      throw std::invalid_argument("uncorrelated_reduction: spectator factor " + std::to_string(i) + " is not free");
  }

  ReductionReport r;
  r.local = rel_entropy_of_resource(factors[static_cast<size_t>(resourceful)], locals[static_cast<size_t>(resourceful)], options);
  r.min_value = rel_entropy_of_resource(rho.matrix(), lo, options);
  r.max_value = rel_entropy_of_resource(rho.matrix(), hi, options);
  const double slack = r.min_value.gap() + r.max_value.gap() + 1e-9;
  r.consistent = std::abs(r.min_value.value - r.max_value.value) <= slack &&
                 std::abs(r.min_value.value - r.local.value) <= r.agreement &&
                 std::abs(r.max_value.value - r.local.value) <= r.agreement;
  return r;
}

namespace {

RateBound ratio(DivergenceResult num, DivergenceResult den, double gap) {
  RateBound r;
  r.numerator = std::move(num);
  r.denominator = std::move(den);
  if (r.denominator.upper_bound <= gap) {
    r.unconstrained = true;
    r.value = r.lower_bound = r.upper_bound = kInfinity;
    return r;
  }
  const double nl = std::max(0.0, r.numerator.lower_bound);
  const double nu = std::max(0.0, r.numerator.upper_bound);
  r.value = std::max(0.0, r.numerator.value) / r.denominator.value;
  r.lower_bound = nl / r.denominator.upper_bound;
  r.upper_bound = r.denominator.lower_bound > 0.0 ? nu / r.denominator.lower_bound : kInfinity;
  if (nu <= 0.0) r.value = r.lower_bound = r.upper_bound = 0.0;
  return r;
}

DivergenceResult regularized(const Matrix& rho, const FreeStateSet& set, Additivity mode, const RateOptions& o) {
  return regularized_rel_entropy(rho, set, mode, mode == Additivity::EvaluateN ? o.copies : 1, o.engine);
}

}  // namespace

RateBound rate_bound(const DensityOperator& rho1, const FreeStateSet& s1, const DensityOperator& rho2,
                     const FreeStateSet& s2, const RateOptions& options) {
  require_dim(rho1.matrix(), s1, "rho1");
  require_dim(rho2.matrix(), s2, "rho2");
  return ratio(regularized(rho1.matrix(), s1, options.numerator, options),
               regularized(rho2.matrix(), s2, options.denominator, options), options.engine.gap);
}

RateBound asymptotic_rate_bound(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<FreeStateSet>& locals, const RateOptions& options) {
  const auto lo = smin(locals);
  const auto hi = smax(locals);
  require_dim(rho.matrix(), lo, "rho");
  require_dim(sigma.matrix(), hi, "sigma");
  return ratio(regularized(rho.matrix(), lo, options.numerator, options),
               regularized(sigma.matrix(), hi, options.denominator, options), options.engine.gap);
}

RateBound assisted_distillation_bound(const DensityOperator& rho_ab, const FreeStateSet& b_set,
                                      const DensityOperator& golden, const RelEntropyOptions& options) {
  require_dim(golden.matrix(), b_set, "golden unit");
  if (rho_ab.dim() % b_set.dim() != 0) throw std::invalid_argument("rho_AB dimension is not a multiple of the B dimension");
  const int da = rho_ab.dim() / b_set.dim();
  const auto joint = smin({FreeStateSet::all_states(da), b_set});
  auto num = rel_entropy_of_resource(rho_ab.matrix(), joint, options);
  auto den = regularized_rel_entropy(golden.matrix(), b_set, Additivity::KnownAdditive, 1, options);
  return ratio(std::move(num), std::move(den), options.gap);
}

double correlation_witness(const DensityOperator& rho_ab, const FreeStateSet& b_set, const DensityOperator& golden,
                           double observed_rate, const RelEntropyOptions& options) {
  require_dim(golden.matrix(), b_set, "golden unit");
  if (rho_ab.dim() % b_set.dim() != 0) throw std::invalid_argument("rho_AB dimension is not a multiple of the B dimension");
  const TensorStructure s({{"A", rho_ab.dim() / b_set.dim()}, {"B", b_set.dim()}});
  const Matrix rho_b = hermitian_part(partial_trace(rho_ab.matrix(), s, {1}));
  const double db = regularized_rel_entropy(rho_b, b_set, Additivity::KnownAdditive, 1, options).value;
  const double dg = regularized_rel_entropy(golden.matrix(), b_set, Additivity::KnownAdditive, 1, options).value;
  return std::max(0.0, observed_rate * dg - db);
}

InducedMonotone induced_monotone(const DensityOperator& rho1, const FreeStateSet& s2, const std::vector<KrausChannel>& family,
                                 const std::vector<Matrix>& auxiliaries, const std::optional<FreeOpClass>& declared,
                                 const RelEntropyOptions& options) {
  if (family.empty()) throw std::invalid_argument("induced_monotone: empty channel family");
  if (declared)
    for (size_t k = 0; k < family.size(); ++k)
      if (!op_in_class(family[k], *declared))
        throw std::invalid_argument("channel " + std::to_string(k) + " is not in " + declared->describe());

  InducedMonotone out;
  const int d1 = rho1.dim();
  for (size_t k = 0; k < family.size(); ++k) {
    const auto& ch = family[k];
    std::vector<Matrix> inputs;
    if (ch.in_dim() == d1) {
      inputs.push_back(rho1.matrix());
    } else {
      if (auxiliaries.empty()) throw std::invalid_argument("channel " + std::to_string(k) + " needs auxiliary states");
      for (const auto& mu : auxiliaries) {
        if (d1 * mu.rows() != ch.in_dim()) throw std::invalid_argument("auxiliary state does not fit channel input");
        inputs.push_back(kron(rho1.matrix(), mu));
      }
    }
    for (size_t a = 0; a < inputs.size(); ++a) {
      Matrix y = hermitian_part(ch.apply(inputs[a]));
      if (y.rows() != s2.dim()) {
        if (y.rows() % s2.dim() != 0) throw std::invalid_argument("channel output does not contain the second system");
        const TensorStructure s({{"1", static_cast<int>(y.rows()) / s2.dim()}, {"2", s2.dim()}});
        y = hermitian_part(partial_trace(y, s, {1}));
      }
      const auto r = rel_entropy_of_resource(y, s2, options);
      ++out.evaluated;
      out.detected = out.detected || !contains(s2, y);
      out.estimate = std::max(out.estimate, r.value);
      out.certified = out.certified && r.certified;
      const double v = std::max(0.0, r.lower_bound);
      if (out.best_channel < 0 || v > out.value) {
        out.value = v;
        out.best_channel = static_cast<int>(k);
        out.best_auxiliary = ch.in_dim() == d1 ? -1 : static_cast<int>(a);
      }
    }
  }
  return out;
}

// --- witness channel -----------------------------------------------------------

namespace {

/// Projected supergradient ascent of min_{mu in S1} Tr W mu - Tr W rho over 0 <= W <= I.
Matrix separating_witness(const Matrix& rho, const FreeStateSet& s1, const WitnessOptions& o, Rng& rng) {
  const int d = static_cast<int>(rho.rows());
  Matrix w = 0.5 * identity(d);
  Matrix best = w;
  double best_f = -kInfinity;
  for (int t = 0; t < o.max_iterations; ++t) {
    const auto l = linear_minimization_oracle(s1, w, rng);
    const double f = l.value - trace_product(w, rho);
    if (f > best_f) {
      best_f = f;
      best = w;
    }
    if (t >= 200 && best_f > 1e-3) break;
    const double step = 1.0 / std::sqrt(t + 1.0);
    w = spectral_map(eig_hermitian(w + step * (l.state - rho)), [](double x) { return std::clamp(x, 0.0, 1.0); });
  }
  if (!(best_f > 0.0)) throw NumericalError("no separating witness found");
  return best;
}

std::pair<Matrix, Matrix> default_segment(const FreeStateSet& s2) {
  if (s2.kind() != SetKind::Separable)
    throw std::invalid_argument("witness_channel: provide a non-member and an interior point for " + s2.describe());
  const auto dims = s2.structure().dims();
  const int m = std::min(dims[0], dims[1]);
  Vector v = Vector::Zero(s2.dim());
  for (int i = 0; i < m; ++i) v(i * dims[1] + i) = 1.0 / std::sqrt(static_cast<double>(m));
  return {projector(v), identity(s2.dim()) / static_cast<double>(s2.dim())};
}

}  // namespace

WitnessChannel witness_channel(const DensityOperator& rho, const FreeStateSet& s1, const FreeStateSet& s2,
                               const WitnessOptions& options) {
  require_dim(rho.matrix(), s1, "rho");
  if (!s2.is_full_dimensional()) throw std::invalid_argument("witness_channel: target set is not full-dimensional");
  if (contains(s1, rho.matrix())) throw std::invalid_argument("witness_channel: state is free");

  Matrix sigma;
  Matrix tau;
  if (options.non_member && options.interior) {
    sigma = *options.non_member;
    tau = *options.interior;
  } else {
    std::tie(sigma, tau) = default_segment(s2);
  }
  if (contains(s2, sigma)) throw std::invalid_argument("witness_channel: segment start is a member");
  if (!contains(s2, tau)) throw std::invalid_argument("witness_channel: segment end is not a member");

  Rng rng(options.seed);
  const int d = s1.dim();
  const Matrix w0 = separating_witness(rho.matrix(), s1, options, rng);

  // Shift and scale into [0, I], then centre the free infimum at 1/2.
  const auto e = eig_hermitian(w0);
  const double s = e.values(0);
  const double norm = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
  const Matrix w1 = (w0 + std::abs(s) * identity(d)) / (norm + std::abs(s));
  LmoOptions lo;
  lo.certify = true;
  const auto inf = linear_minimization_oracle(s1, w1, rng, lo);
  const double q = std::min(inf.value, inf.lower_bound);
  const double r1 = trace_product(w1, rho.matrix());
  if (!(r1 < q)) throw NumericalError("witness normalization lost separation");
  const double eps = 0.5 / std::max(q, 1.0 - q);
  const Matrix w = 0.5 * identity(d) + eps * (w1 - q * identity(d));

  double lo_p = 0.0;
  double hi_p = 1.0;
  while (hi_p - lo_p > options.bisection_tol) {
    const double mid = 0.5 * (lo_p + hi_p);
    if (contains(s2, Matrix((1.0 - mid) * sigma + mid * tau), 1e-12))
      hi_p = mid;
    else
      lo_p = mid;
  }
  const double p = hi_p;
  const double delta = std::min({options.delta, p, 1.0 - p});
  const Matrix sig = (1.0 - p + delta) * sigma + (p - delta) * tau;
  const Matrix ta = (1.0 - p - delta) * sigma + (p + delta) * tau;

  const auto map = [&](const Matrix& x) {
    const Complex tw = (w * x).trace();
    return Matrix((x.trace() - tw) * sig + tw * ta);
  };
  const TensorStructure in = rho.structure().total_dim() == d ? rho.structure() : s1.structure();
  WitnessChannel out{from_linear_map(map, in, s2.structure()), w, trace_product(w, rho.matrix()), 0.5 + eps * (inf.value - q),
                     p, sig, ta, 0};

  if (contains(s2, hermitian_part(out.channel.apply(rho.matrix()))))
    throw NumericalError("witness channel maps the resource state into the target set");
  bool exhaustive = false;
  auto checks = verification_states(s1, rng, options.samples, &exhaustive);
  while (static_cast<int>(checks.size()) < options.samples) checks.push_back(random_free_state(s1, rng));
  for (const auto& mu : checks) {
    if (!contains(s2, hermitian_part(out.channel.apply(mu)), 1e-9))
      throw NumericalError("witness channel maps a free state outside the target set");
    ++out.verified;
  }
  return out;
}

// --- affine no-go --------------------------------------------------------------

std::vector<Matrix> product_state_basis(const std::vector<int>& dims) {
  std::vector<Matrix> out{Matrix::Identity(1, 1)};
  for (int d : dims) {
    std::vector<Matrix> local;
    for (int j = 0; j < d; ++j) local.push_back(basis_projector(d, j));
    for (int j = 0; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        Vector v = Vector::Zero(d);
        v(j) = 1.0 / std::sqrt(2.0);
        v(k) = 1.0 / std::sqrt(2.0);
        local.push_back(projector(v));
        v(k) = Complex(0.0, 1.0 / std::sqrt(2.0));
        local.push_back(projector(v));
      }
    std::vector<Matrix> next;
    for (const auto& a : out)
      for (const auto& b : local) next.push_back(kron(a, b));
    out = std::move(next);
  }
  return out;
}

NogoReport nogo_entanglement_to_coherence(const KrausChannel& channel, const FreeStateSet& coherence, double tol) {
  if (coherence.kind() != SetKind::Incoherent) throw std::invalid_argument("nogo: the first party must carry an incoherent set");
  const auto& in = channel.in_structure();
  const auto& out = channel.out_structure();
  if (in.size() < 2) throw std::invalid_argument("nogo: the channel needs a first party and a remainder");
  if (out.dims().front() != coherence.dim()) throw std::invalid_argument("nogo: first output party does not match the set");

  const auto in_dims = in.dims();
  const std::vector<int> rest_dims(in_dims.begin() + 1, in_dims.end());
  const auto basis = product_state_basis(rest_dims);
  const int rest = std::accumulate(rest_dims.begin(), rest_dims.end(), 1, std::multiplies<>());
  const auto n = static_cast<Eigen::Index>(basis.size());

  Eigen::MatrixXd coords(2 * rest * rest, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Matrix& b = basis[static_cast<size_t>(k)];
    for (int i = 0; i < rest * rest; ++i) {
      coords(i, k) = b.data()[i].real();
      coords(rest * rest + i, k) = b.data()[i].imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  NogoReport r;
  r.basis_size = static_cast<int>(n);
  r.condition_number = sv(0) / sv(sv.size() - 1);
  if (!(r.condition_number < 1e8)) throw NumericalError("product basis does not span the Hermitian operators");

  Vector psi = Vector::Zero(rest);
  const int m = *std::min_element(rest_dims.begin(), rest_dims.end());
  for (int i = 0; i < m; ++i) {
    int idx = 0;
    for (int d : rest_dims) idx = idx * d + i;
    psi(idx) = 1.0 / std::sqrt(static_cast<double>(m));
  }
  const Matrix target = projector(psi);
  Eigen::VectorXd t(2 * rest * rest);
  for (int i = 0; i < rest * rest; ++i) {
    t(i) = target.data()[i].real();
    t(rest * rest + i) = target.data()[i].imag();
  }
  const Eigen::VectorXd c = svd.solve(t);
  r.reconstruction_error = (coords * c - t).norm();

  const auto free_inputs = *extreme_points(coherence);
  for (const auto& mu : free_inputs) {
    Matrix predicted = Matrix::Zero(coherence.dim(), coherence.dim());
    for (Eigen::Index k = 0; k < n; ++k) {
      const Matrix m1 = marginal(channel.apply(kron(mu, basis[static_cast<size_t>(k)])), out, 0);
      r.basis_offdiagonal = std::max(r.basis_offdiagonal, offdiagonal_norm(m1, coherence));
      predicted += c(k) * m1;
    }
    const Matrix direct = marginal(channel.apply(kron(mu, target)), out, 0);
    r.direct_offdiagonal = std::max(r.direct_offdiagonal, offdiagonal_norm(direct, coherence));
    r.reconstruction_error = std::max(r.reconstruction_error, (predicted - direct).norm());
  }
  r.passed = r.basis_offdiagonal <= tol && r.direct_offdiagonal <= tol && r.reconstruction_error <= 1e-8;
  r.detail = std::to_string(free_inputs.size()) + " free inputs x " + std::to_string(n) + " basis states";
  return r;
}

// --- named constructions -------------------------------------------------------

KrausChannel coherence_to_entanglement_map() {
  const TensorStructure s({{"1", 2}, {"A", 2}, {"B", 2}});
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const Matrix zero = basis_projector(2, 0);
  const auto map = [&](const Matrix& x) {
    const Matrix first = partial_trace(x, s, {0});
    return Matrix(kron(zero, cnot * kron(first, zero) * cnot.adjoint()));
  };
  return from_linear_map(map, s, s);
}

KrausChannel reset_to_zero_map() {
  const TensorStructure s({{"1", 2}, {"2", 2}});
  return KrausChannel::replacement(s, DensityOperator(basis_projector(4, 0), s));
}

}  // namespace rescomp
