#include "rescomp/composite.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rescomp {

FreeStateSet smin(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels) {
  if (locals.size() < 2) throw std::invalid_argument("smin needs at least two local sets");
  return FreeStateSet::min_composite(locals, labels);
}

FreeStateSet smax(const std::vector<FreeStateSet>& locals, const std::vector<std::string>& labels) {
  if (locals.size() < 2) throw std::invalid_argument("smax needs at least two local sets");
  return FreeStateSet::max_composite(locals, labels);
}

namespace {

/// Concatenated party layout of local channels, renumbered when labels clash.
std::pair<TensorStructure, TensorStructure> joint_structures(const std::vector<KrausChannel>& locals) {
  std::vector<Party> in, out;
  std::set<std::string> seen;
  bool clash = false;
  for (const auto& c : locals)
    for (const auto& p : c.in_structure().parties()) clash = clash || !seen.insert(p.label).second;
  for (size_t i = 0; i < locals.size(); ++i) {
    const auto& ci = locals[i].in_structure().parties();
    const auto& co = locals[i].out_structure().parties();
    const bool same_layout = ci.size() == co.size();
    for (size_t j = 0; j < ci.size(); ++j) {
      std::string label = ci[j].label;
      if (clash) label = std::to_string(i + 1) + (ci.size() > 1 ? "." + std::to_string(j + 1) : "");
      in.push_back({label, ci[j].dim});
      if (same_layout) out.push_back({label, co[j].dim});
    }
    if (!same_layout)
      for (size_t j = 0; j < co.size(); ++j) out.push_back({std::to_string(i + 1) + ".out" + std::to_string(j + 1), co[j].dim});
  }
  return {TensorStructure(std::move(in)), TensorStructure(std::move(out))};
}

KrausChannel product_channel(const std::vector<KrausChannel>& locals) {
  if (locals.empty()) throw std::invalid_argument("product of no channels");
  std::vector<Matrix> ks{Matrix::Identity(1, 1)};
  for (const auto& c : locals) {
    std::vector<Matrix> next;
    for (const auto& a : ks)
      for (const auto& b : c.kraus()) next.push_back(kron(a, b));
    ks = std::move(next);
  }
  auto [in, out] = joint_structures(locals);
  return KrausChannel(std::move(ks), in, out, 1e-8);
}

}  // namespace

KrausChannel fmin_element(const std::vector<std::vector<KrausChannel>>& terms, const std::vector<double>& weights) {
  if (terms.empty() || terms.size() != weights.size()) throw std::invalid_argument("fmin_element: terms and weights differ in length");
  std::vector<KrausChannel> products;
  for (const auto& t : terms) products.push_back(product_channel(t));
  const auto& s0 = products.front();
  for (auto& p : products)
    if (p.in_dim() != s0.in_dim() || p.out_dim() != s0.out_dim())
      throw std::invalid_argument("fmin_element: products act on different spaces");
  std::vector<KrausChannel> aligned;
  for (const auto& p : products) aligned.emplace_back(p.kraus(), s0.in_structure(), s0.out_structure(), 1e-8);
  return mixture(aligned, weights);
}

KrausChannel fmin_element(const std::vector<KrausChannel>& locals) { return product_channel(locals); }

KrausChannel random_fmin_element(const std::vector<LocalTheory>& locals, Rng& rng, int terms) {
  std::vector<std::vector<KrausChannel>> ts;
  for (int t = 0; t < terms; ++t) {
    std::vector<KrausChannel> product;
    for (const auto& l : locals) product.push_back(random_free_op(l.ops, l.states.dim(), rng));
    ts.push_back(std::move(product));
  }
  return fmin_element(ts, random_probabilities(terms, rng));
}

KrausChannel random_measure_prepare(const TensorStructure& in, const FreeStateSet& out_set, Rng& rng, int outcomes) {
  if (outcomes < 1) throw std::invalid_argument("random_measure_prepare needs at least one outcome");
  const int d = in.total_dim();
  const Matrix v = random_unitary(d * outcomes, rng).leftCols(d);
  std::vector<Matrix> effects;
  std::vector<Matrix> prepared;
  for (int k = 0; k < outcomes; ++k) {
    const Matrix a = v.middleRows(k * d, d);
    effects.push_back(a.adjoint() * a);
    prepared.push_back(random_free_state(out_set, rng));
  }
  const auto map = [&](const Matrix& x) {
    Matrix y = Matrix::Zero(out_set.dim(), out_set.dim());
    for (int k = 0; k < outcomes; ++k) y += (effects[k] * x).trace() * prepared[k];
    return y;
  };
  return from_linear_map(map, in, out_set.structure());
}

// --- reports -----------------------------------------------------------------

namespace {

template <typename V>
const ConditionVerdict& find_verdict(const V& list, const std::string& name) {
  for (const auto& c : list)
    if (c.name == name) return c;
  throw std::out_of_range("no verdict named '" + name + "'");
}

/// Party index ranges of each local inside the joint structure.
std::vector<std::vector<int>> local_ranges(const std::vector<FreeStateSet>& locals) {
  std::vector<std::vector<int>> out;
  int off = 0;
  for (const auto& l : locals) {
    std::vector<int> r(l.structure().size());
    std::iota(r.begin(), r.end(), off);
    off += static_cast<int>(r.size());
    out.push_back(std::move(r));
  }
  return out;
}

TensorStructure joint_structure(const std::vector<FreeStateSet>& locals) {
  std::vector<Party> parties;
  for (size_t i = 0; i < locals.size(); ++i)
    for (size_t j = 0; j < locals[i].structure().size(); ++j)
      parties.push_back({"p" + std::to_string(i) + "_" + std::to_string(j), locals[i].structure().parties()[j].dim});
  return TensorStructure(std::move(parties));
}

/// Mix of boundary and interior samples of a set.
std::vector<Matrix> sample_states(const FreeStateSet& set, Rng& rng, int samples, bool* exhaustive) {
  auto v = verification_states(set, rng, samples, exhaustive);
  if (exhaustive && *exhaustive) return v;
  for (int i = 0; i < samples; ++i) v.push_back(random_free_state(set, rng));
  return v;
}

std::vector<Matrix> product_samples(const std::vector<FreeStateSet>& locals, Rng& rng, int samples, bool* exhaustive) {
  // Exhaustive when every local has a finite extreme-point list.
  std::vector<std::vector<Matrix>> pts;
  size_t total = 1;
  bool finite = true;
  for (const auto& l : locals) {
    auto p = extreme_points(l);
    if (!p) {
      finite = false;
      break;
    }
    total *= p->size();
    pts.push_back(std::move(*p));
  }
  std::vector<Matrix> out;
  if (finite && total <= 4096) {
    *exhaustive = true;
    for (size_t c = 0; c < total; ++c) {
      size_t rem = c;
      Matrix m = Matrix::Identity(1, 1);
      for (const auto& p : pts) {
        m = kron(m, p[rem % p.size()]);
        rem /= p.size();
      }
      out.push_back(m);
    }
    return out;
  }
  *exhaustive = false;
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < samples; ++s) {
    Matrix m = Matrix::Identity(1, 1);
    for (const auto& l : locals) {
      if (coin(rng)) {
        m = kron(m, random_free_state(l, rng));
      } else {
        const auto v = verification_states(l, rng, 1);
        std::uniform_int_distribution<size_t> pick(0, v.size() - 1);
        m = kron(m, v[pick(rng)]);
      }
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

bool AxiomReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionVerdict& c) { return c.passed; });
}
const ConditionVerdict& AxiomReport::get(const std::string& name) const { return find_verdict(conditions, name); }

bool BpReport::passed() const {
  return std::all_of(axioms.begin(), axioms.end(), [](const ConditionVerdict& c) { return c.passed; });
}
const ConditionVerdict& BpReport::get(const std::string& name) const { return find_verdict(axioms, name); }

AxiomReport check_axioms(const FreeStateSet& candidate, const std::vector<KrausChannel>& candidate_ops,
                         const std::vector<LocalTheory>& locals, const AxiomOptions& options) {
  if (locals.empty()) throw std::invalid_argument("check_axioms: no local theories");
  std::vector<FreeStateSet> local_sets;
  for (const auto& l : locals) local_sets.push_back(l.states);
  const auto joint = joint_structure(local_sets);
  if (joint.total_dim() != candidate.dim()) throw std::invalid_argument("check_axioms: candidate and locals differ in dimension");
  const auto ranges = local_ranges(local_sets);
  Rng rng(options.seed);
  AxiomReport report;
  report.seed = options.seed;

  {  // (a) free product states
    ConditionVerdict v;
    v.name = "product_states";
    bool exhaustive = false;
    const auto states = product_samples(local_sets, rng, options.state_samples, &exhaustive);
    v.mode = exhaustive ? "exhaustive" : "sampled";
    for (const auto& s : states) {
      ++v.checked;
      if (!contains(candidate, s, options.tol)) {
        v.passed = false;
        v.counterexample_state = s;
        v.detail = "a product of locally free states lies outside the candidate set";
        break;
      }
    }
    report.conditions.push_back(std::move(v));
  }

  {  // (b) free product operations
    ConditionVerdict v;
    v.name = "product_operations";
    const FreeOpClass cls = options.candidate_class ? *options.candidate_class : FreeOpClass::rng(candidate);
    const bool samplable = std::none_of(locals.begin(), locals.end(), [](const LocalTheory& l) { return l.ops.kind == OpKind::Lfocc; });
    if (!samplable) {
      v.mode = "skipped";
      v.detail = "local classes given as protocols cannot be sampled";
    } else {
      for (int k = 0; k < options.channel_samples; ++k) {
        std::vector<KrausChannel> product;
        for (const auto& l : locals) product.push_back(random_free_op(l.ops, l.states.dim(), rng));
        const auto ch = fmin_element(product);
        ++v.checked;
        const auto c = check_op_class(ch, cls, 1e-8, options.seed + static_cast<uint64_t>(k), 40);
        if (!c.passed) {
          v.passed = false;
          v.counterexample_channel = ch;
          v.counterexample_state = c.counterexample;
          v.detail = "a product of local free operations is not in " + cls.describe();
          break;
        }
      }
    }
    report.conditions.push_back(std::move(v));
  }

  {  // (c) free marginal states
    ConditionVerdict v;
    v.name = "marginal_states";
    bool exhaustive = false;
    const auto states = sample_states(candidate, rng, options.state_samples, &exhaustive);
    v.mode = exhaustive ? "exhaustive" : "sampled";
    for (const auto& s : states) {
      ++v.checked;
      for (size_t i = 0; i < locals.size() && v.passed; ++i) {
        const Matrix m = hermitian_part(partial_trace(s, joint, ranges[i]));
        if (!contains(local_sets[i], m, std::max(options.tol, 1e-7))) {
          v.passed = false;
          v.counterexample_state = s;
          v.detail = "marginal on local " + std::to_string(i + 1) + " is not locally free";
        }
      }
      if (!v.passed) break;
    }
    report.conditions.push_back(std::move(v));
  }

  {  // (d) free marginal operations
    ConditionVerdict v;
    v.name = "marginal_operations";
    const bool single_party = std::all_of(local_sets.begin(), local_sets.end(), [](const FreeStateSet& s) { return s.structure().size() == 1; });
    if (!single_party) {
      v.mode = "skipped";
      v.detail = "marginal operations are checked for single-party locals only";
    }
    for (size_t c = 0; c < candidate_ops.size() && single_party && v.passed; ++c) {
      const auto& op = candidate_ops[c];
      if (op.in_dim() != candidate.dim() || op.out_dim() != candidate.dim() || op.in_structure().size() != locals.size() ||
          op.out_structure().size() != locals.size())
        throw std::invalid_argument("check_axioms: candidate operation does not match the local layout");
      const auto labels = op.in_structure().labels();
      for (size_t i = 0; i < locals.size() && v.passed; ++i) {
        if (locals[i].ops.kind == OpKind::Lfocc) continue;
        for (int s = 0; s < 4 && v.passed; ++s) {
          std::map<std::string, DensityOperator> frozen;
          for (size_t j = 0; j < locals.size(); ++j) {
            if (j == i) continue;
            const Matrix m = s == 0 ? reference_state(local_sets[j]) : random_free_state(local_sets[j], rng);
            frozen.emplace(labels[j], DensityOperator(m, TensorStructure::single(local_sets[j].dim(), labels[j])));
          }
          const auto marg = marginal_channel(op, labels[i], frozen);
          ++v.checked;
          const auto chk = check_op_class(marg, locals[i].ops, 1e-8, options.seed);
          if (!chk.passed) {
            v.passed = false;
            v.counterexample_channel = marg;
            v.counterexample_state = chk.counterexample;
            v.detail = "operation " + std::to_string(c) + " has a marginal on party '" + labels[i] + "' outside " +
                       locals[i].ops.describe();
          }
        }
      }
    }
    report.conditions.push_back(std::move(v));
  }
  return report;
}

SandwichReport check_sandwich(const FreeStateSet& set, const std::vector<FreeStateSet>& locals, const AxiomOptions& options) {
  const auto lo = FreeStateSet::min_composite(locals);
  const auto hi = FreeStateSet::max_composite(locals);
  if (lo.dim() != set.dim()) throw std::invalid_argument("check_sandwich: dimension mismatch");
  Rng rng(options.seed);
  SandwichReport r;
  r.lower.name = "smin_subset";
  r.upper.name = "smax_superset";
  bool exhaustive = false;
  for (const auto& s : sample_states(lo, rng, options.state_samples, &exhaustive)) {
    ++r.lower.checked;
    if (!contains(set, s, options.tol)) {
      r.lower.passed = false;
      r.lower.counterexample_state = s;
      r.lower.detail = "a min-composite state lies outside the set";
      break;
    }
  }
  r.lower.mode = exhaustive ? "exhaustive" : "sampled";
  for (const auto& s : sample_states(set, rng, options.state_samples, &exhaustive)) {
    ++r.upper.checked;
    if (!contains(hi, s, std::max(options.tol, 1e-7))) {
      r.upper.passed = false;
      r.upper.counterexample_state = s;
      r.upper.detail = "a member of the set has a marginal that is not locally free";
      break;
    }
  }
  r.upper.mode = exhaustive ? "exhaustive" : "sampled";
  return r;
}

// --- multi-copy families -----------------------------------------------------

namespace {

TensorStructure copies_structure(int base_dim, int n) {
  std::vector<Party> parties;
  for (int c = 0; c < n; ++c) parties.push_back({"c" + std::to_string(c + 1), base_dim});
  return TensorStructure(std::move(parties));
}

/// Samples of S_n with maximally entangled probes where S_n admits them.
std::vector<Matrix> family_samples(const FreeStateSet& set, Rng& rng, int samples) {
  std::vector<Matrix> out;
  const auto dims = set.structure().dims();
  if (dims.size() == 2 && dims[0] == dims[1]) {
    const Matrix phi = maximally_entangled(dims[0]).matrix();
    if (contains(set, phi, 1e-8)) out.push_back(phi);
  }
  bool exhaustive = false;
  for (const auto& s : sample_states(set, rng, samples, &exhaustive)) out.push_back(s);
  return out;
}

}  // namespace

BpReport check_bp_axioms(const SetFamily& family, int max_n, const AxiomOptions& options) {
  if (max_n < 1 || max_n > 3) throw std::invalid_argument("check_bp_axioms supports 1 <= max_n <= 3");
  for (int n = 1; n <= max_n; ++n)
    if (!family.count(n)) throw std::invalid_argument("family is missing n = " + std::to_string(n));
  const int d1 = family.at(1).dim();
  for (int n = 2; n <= max_n; ++n) {
    int expect = 1;
    for (int k = 0; k < n; ++k) expect *= d1;
    if (family.at(n).dim() != expect) throw std::invalid_argument("family member dimensions are not powers of the base");
  }
  Rng rng(options.seed);
  const int samples = std::max(4, options.state_samples / 10);
  std::map<int, std::vector<Matrix>> pool;
  for (int n = 1; n <= max_n; ++n) pool[n] = family_samples(family.at(n), rng, samples);

  BpReport report;
  report.seed = options.seed;
  const auto fail = [](ConditionVerdict& v, const Matrix& s, std::string detail) {
    v.passed = false;
    v.counterexample_state = s;
    v.detail = std::move(detail);
  };

  {
    ConditionVerdict v;
    v.name = "convexity";
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= max_n && v.passed; ++n) {
      const auto& p = pool[n];
      for (size_t i = 0; i + 1 < p.size() && v.passed; ++i) {
        const double w = u(rng);
        const Matrix m = w * p[i] + (1.0 - w) * p[i + 1];
        ++v.checked;
        if (!contains(family.at(n), m, options.tol)) fail(v, m, "mixture of members left S_" + std::to_string(n));
      }
    }
    report.axioms.push_back(std::move(v));
  }
  {
    ConditionVerdict v;
    v.name = "full_rank";
    v.mode = "exhaustive";
    for (int n = 1; n <= max_n && v.passed; ++n) {
      const Matrix r = reference_state(family.at(n));
      const Matrix mixed = identity(r.rows()) / static_cast<double>(r.rows());
      ++v.checked;
      const bool ok = (min_eigenvalue(r) > kSupportTol && contains(family.at(n), r, options.tol)) ||
                      contains(family.at(n), mixed, options.tol);
      if (!ok) fail(v, r, "no full-rank member found in S_" + std::to_string(n));
    }
    report.axioms.push_back(std::move(v));
  }
  {
    ConditionVerdict v;
    v.name = "marginal_closure";
    for (int n = 2; n <= max_n && v.passed; ++n) {
      const auto s = copies_structure(d1, n);
      std::vector<int> keep(static_cast<size_t>(n - 1));
      std::iota(keep.begin(), keep.end(), 0);
      for (const auto& m : pool[n]) {
        ++v.checked;
        const Matrix r = hermitian_part(partial_trace(m, s, keep));
        if (!contains(family.at(n - 1), r, std::max(options.tol, 1e-7))) {
          fail(v, m, "discarding the last copy of a member of S_" + std::to_string(n) + " leaves S_" + std::to_string(n - 1));
          break;
        }
      }
    }
    report.axioms.push_back(std::move(v));
  }
  {
    ConditionVerdict v;
    v.name = "tensor_closure";
    for (int m = 1; m <= max_n && v.passed; ++m)
      for (int n = 1; m + n <= max_n && v.passed; ++n) {
        const auto& a = pool[m];
        const auto& b = pool[n];
        for (size_t i = 0; i < std::min(a.size(), b.size()) && v.passed; ++i) {
          const Matrix t = kron(a[i], b[i]);
          ++v.checked;
          if (!contains(family.at(m + n), t, options.tol))
            fail(v, t, "S_" + std::to_string(m) + " x S_" + std::to_string(n) + " is not inside S_" + std::to_string(m + n));
        }
      }
    report.axioms.push_back(std::move(v));
  }
  {
    ConditionVerdict v;
    v.name = "permutation_closure";
    for (int n = 2; n <= max_n && v.passed; ++n) {
      const auto s = copies_structure(d1, n);
      const auto swap = swap_channel(s, 0, 1);
      for (const auto& m : pool[n]) {
        ++v.checked;
        const Matrix t = swap.apply(m);
        if (!contains(family.at(n), t, options.tol)) {
          fail(v, m, "swapping the first two copies leaves S_" + std::to_string(n));
          break;
        }
      }
    }
    report.axioms.push_back(std::move(v));
  }
  return report;
}

SetFamily bp_violation_family() {
  const auto half = FreeStateSet::singleton(maximally_mixed(2));
  const auto s1 = smax({half, half});
  const auto s2 = FreeStateSet::min_composite({s1, FreeStateSet::singleton(maximally_mixed(4))});
  return {{1, s1}, {2, s2}};
}

}  // namespace rescomp
