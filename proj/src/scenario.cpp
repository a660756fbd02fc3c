#include "rescomp/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rescomp/certify.hpp"

namespace rescomp {

namespace {

struct Builtin {
  const char* name;
  const char* text;
};

const Builtin kBuiltins[] = {
#include "rescomp/builtin_scenarios.inc"
    {nullptr, nullptr}};

const char* const kSchemaText =
#include "rescomp/schema_text.inc"
    ;

const std::set<std::string> kKinds{"divergence",    "single_shot", "conversion", "assisted",
                                   "certification", "axioms",      "bp_axioms",  "counterexample"};

struct Context {
  uint64_t seed = 0;
  double gap = 1e-4;
};

RelEntropyOptions engine(const Context& c) {
  RelEntropyOptions o;
  o.gap = c.gap;
  o.seed = c.seed;
  return o;
}

HypothesisOptions hypothesis_options(const Json& params, const Context& c) {
  HypothesisOptions o;
  o.tests = parse_test_class(params.value("tests", std::string("all")));
  if (params.contains("basis")) o.basis = matrix_from_json(params.at("basis"));
  o.seed = c.seed;
  return o;
}

double epsilon_of(const Json& params) {
  if (!params.contains("epsilon")) throw SchemaError("params.epsilon is required");
  const double eps = params.at("epsilon").get<double>();
  if (!(eps > 0.0 && eps < 1.0)) throw SchemaError("params.epsilon must lie in (0, 1)");
  return eps;
}

void require_converged(const DivergenceResult& r, const std::string& what) {
  if (!r.converged) throw NumericalError(what + " did not reach its gap (" + std::to_string(r.gap()) + ")");
}

Additivity parse_additivity(const std::string& s) {
  if (s == "known") return Additivity::KnownAdditive;
  if (s == "asserted") return Additivity::AssertedAdditive;
  if (s == "evaluate") return Additivity::EvaluateN;
  throw SchemaError("unknown additivity mode '" + s + "'");
}

std::vector<FreeStateSet> parse_sets(const Json& arr) {
  std::vector<FreeStateSet> out;
  for (const auto& s : arr) out.push_back(parse_set(s));
  return out;
}

double fidelity(const Matrix& a, const Matrix& b) {
  const Matrix sa = spectral_map(eig_hermitian(a), [](double x) { return std::sqrt(std::max(0.0, x)); });
  const auto e = eig_hermitian(Matrix(sa * b * sa));
  double t = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) t += std::sqrt(std::max(0.0, e.values(i)));
  return t * t;
}

// --- kinds -----------------------------------------------------------------------

void run_divergence(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto rho = parse_state(in.at("state"));
  const auto set = parse_set(in.at("set"));
  const bool with_opt = params.value("optimizer", true);
  const auto quantities = params.value("quantities", std::vector<std::string>{"relative_entropy"});
  for (const auto& q : quantities) {
    DivergenceResult r;
    if (q == "relative_entropy" || q == "relative_entropy_iterative") {
      auto o = engine(c);
      o.force_iterative = q == "relative_entropy_iterative";
      r = rel_entropy_of_resource(rho, set, o);
    } else if (q == "dmax") {
      DmaxOptions o;
      o.seed = c.seed;
      r = dmax(rho.matrix(), set, o);
    } else if (q == "hypothesis") {
      r = hypothesis_testing(rho.matrix(), set, epsilon_of(params), hypothesis_options(params, c));
    } else if (q == "regularized") {
      r = regularized_rel_entropy(rho.matrix(), set, parse_additivity(params.value("additivity", std::string("known"))),
                                  params.value("copies", 1), engine(c));
    } else {
      throw SchemaError("unknown quantity '" + q + "'");
    }
    results[q] = to_json(r, with_opt);
    require_converged(r, q);
  }
}

void run_single_shot(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto locals = parse_sets(in.at("locals"));
  if (in.contains("rho")) {
    const auto rho = parse_state(in.at("rho"));
    const auto sigma = parse_state(in.at("sigma"));
    results["bound"] = to_json(single_shot_verdict(rho, sigma, locals, engine(c)));
    if (params.value("rate", false)) {
      RateOptions ro;
      ro.engine = engine(c);
      results["rate"] = to_json(asymptotic_rate_bound(rho, sigma, locals, ro));
    }
  }
  if (in.contains("reduction")) {
    const auto& red = in.at("reduction");
    const auto state = parse_state(red.at("state"));
    results["reduction"] = to_json(uncorrelated_reduction(state, locals, red.value("resourceful", 0), engine(c)));
  }
}

void run_conversion(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto input = parse_state(in.at("input"));
  const auto target = parse_state(in.at("target"));
  if (in.contains("channel")) {
    const auto ch = parse_channel(in.at("channel"));
    if (ch.in_dim() != input.dim() || ch.out_dim() != target.dim())
      throw SchemaError("channel dimensions do not match the input and target states");
    const Matrix out = ch.apply(input.matrix());
    results["trace_distance"] = number(trace_norm_distance(out, target.matrix()));
    results["fidelity"] = number(fidelity(out, target.matrix()));
    if (in.contains("op_class")) {
      const auto cls = parse_op_class(in.at("op_class"));
      results["op_check"] = to_json(check_op_class(ch, cls, 1e-9, c.seed, params.value("samples", 200)));
    }
  }
  if (in.contains("locals")) {
    results["verdict"] = to_json(single_shot_verdict(input, target, parse_sets(in.at("locals")), engine(c)));
  } else if (in.contains("s1") && in.contains("s2")) {
    const auto s1 = parse_set(in.at("s1"));
    const auto s2 = parse_set(in.at("s2"));
    results["verdict"] = to_json(conversion_verdict(input, s1, target, s2, engine(c)));
    if (params.value("rate", false)) {
      RateOptions ro;
      ro.engine = engine(c);
      results["rate"] = to_json(rate_bound(input, s1, target, s2, ro));
    }
  }
}

void run_assisted(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto rho = parse_state(in.at("state"));
  const auto b_set = parse_set(in.at("b_set"));
  const auto golden = parse_state(in.at("golden"));
  const auto bound = assisted_distillation_bound(rho, b_set, golden, engine(c));
  results["bound"] = to_json(bound);
  const int db = b_set.dim();
  const int da = rho.dim() / db;
  const TensorStructure ab({{"A", da}, {"B", db}});
  const Matrix rho_b = partial_trace(rho.matrix(), ab, {1});
  const Matrix basis = b_set.kind() == SetKind::Incoherent ? b_set.basis() : Matrix();
  const double s_b = von_neumann_entropy(dephase(rho_b, basis));
  results["dephased_marginal_entropy"] = number(s_b);
  // For pure states the numerator equals the dephased marginal entropy.
  results["identity_residual"] = number(std::abs(bound.numerator.value - s_b));
  if (params.contains("observed_rate"))
    results["correlation_witness"] =
        number(correlation_witness(rho, b_set, golden, params.at("observed_rate").get<double>(), engine(c)));
}

Json errors_json(const TestErrors& e) { return {{"alpha", number(e.alpha)}, {"beta", number(e.beta)}}; }

void run_certification(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto mode = params.value("mode", std::string("remote"));
  const auto rho = parse_state(in.at("state"));
  const double eps = epsilon_of(params);
  if (mode == "standard") {
    const auto set = parse_set(in.at("set"));
    const auto r = standard_certification(rho, set, eps, hypothesis_options(params, c));
    results["hypothesis"] = to_json(r, true);
    results["floor"] = number(-std::log2(1.0 - eps));
    return;
  }
  if (mode == "remote") {
    const auto set = parse_set(in.at("set"));
    std::vector<KrausChannel> family;
    for (const auto& ch : in.at("family")) family.push_back(parse_channel(ch));
    RemoteOptions ro;
    ro.tests = parse_test_class(params.value("tests", std::string("all")));
    if (in.contains("auxiliary")) ro.auxiliary = parse_state(in.at("auxiliary")).matrix();
    ro.seed = c.seed;
    const auto r = remote_certification(rho, set, family, eps, ro);
    results["certification"] = to_json(r);
    Json per = Json::array();
    for (const auto& p : r.per_channel) per.push_back(number(p.value));
    results["per_channel"] = per;
    if (in.contains("fixed")) {
      const auto& f = in.at("fixed");
      const size_t idx = f.value("channel", 0);
      if (idx >= family.size()) throw SchemaError("fixed.channel is out of range");
      results["fixed"] = errors_json(certification_errors(rho, set, family[idx], matrix_from_json(f.at("test")),
                                                          ro.auxiliary, c.seed));
    }
    return;
  }
  if (mode == "lfocc_sampled") {
    const auto set = parse_set(in.at("set"));
    const auto classes = parse_op_class(in.at("classes"));
    const auto structure = structure_from_dims(in.at("dims").get<std::vector<int>>(),
                                               in.value("labels", std::vector<std::string>{"A", "B"}));
    const int n = params.value("protocols", 100);
    const int rounds = params.value("rounds", 3);
    Rng rng(c.seed);
    const int db = structure.parties()[1].dim;
    double worst_off = 0.0, worst_excess = -kInfinity, ceiling = 0.0;
    int diagonal = 0, within = 0;
    for (int k = 0; k < n; ++k) {
      const auto protocol = random_lfocc_protocol(structure, classes, rounds, rng);
      const Matrix u = random_unitary(db, rng);
      RealVector w(db);
      for (int i = 0; i < db; ++i) w(i) = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const Matrix test = u * w.cast<Complex>().asDiagonal() * u.adjoint();
      const auto r = lfocc_ceiling(rho, set, protocol, test, eps, classes, Matrix(), c.seed);
      worst_off = std::max(worst_off, r.offdiagonal);
      ceiling = r.report.ceiling;
      const double excess = r.report.value - r.report.ceiling;
      worst_excess = std::max(worst_excess, excess);
      diagonal += r.diagonal ? 1 : 0;
      within += excess <= 1e-6 ? 1 : 0;
    }
    results["protocols"] = n;
    results["max_offdiagonal"] = number(worst_off);
    results["diagonal_count"] = diagonal;
    results["ceiling"] = number(ceiling);
    results["max_excess"] = number(worst_excess);
    results["within_ceiling_count"] = within;
    results["all_diagonal"] = diagonal == n;
    results["ceiling_respected"] = within == n;
    return;
  }
  if (mode == "rng_optimal") {
    const auto s_a = parse_set(in.at("s_a"));
    const auto s_b = parse_set(in.at("s_b"));
    const auto mu = parse_state(in.at("mu"));
    const auto [channel, report] = rng_optimal_protocol(rho, s_a, s_b, mu, eps, c.seed);
    results["certification"] = to_json(report);
    results["kraus_rank"] = channel.kraus().size();
    return;
  }
  throw SchemaError("unknown certification mode '" + mode + "'");
}

std::vector<LocalTheory> parse_theories(const Json& arr) {
  std::vector<LocalTheory> out;
  for (const auto& t : arr) out.push_back({parse_set(t.at("states")), parse_op_class(t.at("ops"))});
  return out;
}

AxiomOptions axiom_options(const Json& params, const Context& c) {
  AxiomOptions o;
  o.state_samples = params.value("state_samples", o.state_samples);
  o.channel_samples = params.value("channel_samples", o.channel_samples);
  o.seed = c.seed;
  return o;
}

void run_axioms(const Json& in, const Json& params, const Context& c, Json& results) {
  const auto candidate = parse_set(in.at("candidate"));
  const auto locals = parse_theories(in.at("locals"));
  std::vector<KrausChannel> ops;
  if (in.contains("candidate_ops"))
    for (const auto& ch : in.at("candidate_ops")) ops.push_back(parse_channel(ch));
  auto o = axiom_options(params, c);
  if (in.contains("candidate_class")) o.candidate_class = parse_op_class(in.at("candidate_class"));
  results["axioms"] = to_json(check_axioms(candidate, ops, locals, o));
  if (params.value("sandwich", false)) {
    std::vector<FreeStateSet> sets;
    for (const auto& l : locals) sets.push_back(l.states);
    const auto s = check_sandwich(candidate, sets, o);
    results["sandwich"] = {{"passed", s.passed()}, {"lower", to_json(s.lower)}, {"upper", to_json(s.upper)}};
  }
}

void run_bp_axioms(const Json& in, const Json& params, const Context& c, Json& results) {
  SetFamily family;
  const auto& f = in.at("family");
  if (f.is_string()) {
    if (f.get<std::string>() != "bp_violation") throw SchemaError("unknown built-in family '" + f.get<std::string>() + "'");
    family = bp_violation_family();
  } else {
    for (const auto& it : f.items()) family.emplace(std::stoi(it.key()), parse_set(it.value()));
  }
  results["bp"] = to_json(check_bp_axioms(family, params.value("max_n", 2), axiom_options(params, c)));
}

// --- counterexample checks -----------------------------------------------------------

Json check_rng(const Json& spec, const Context& c) {
  const auto ch = parse_channel(spec.at("channel"));
  const auto set = parse_set(spec.at("set"));
  Json out = to_json(check_op_class(ch, FreeOpClass::rng(set), 1e-9, c.seed, spec.value("samples", 200)));
  if (spec.contains("probe")) {
    const auto probe = parse_state(spec.at("probe"));
    out["probe_in_set"] = contains(set, probe.matrix());
    out["probe_image_in_set"] = contains(set, ch.apply(probe.matrix()));
  }
  return out;
}

Json check_marginal_unitality(const Json& spec) {
  const auto ch = parse_channel(spec.at("channel"));
  const auto target = spec.at("target").get<std::string>();
  std::map<std::string, DensityOperator> frozen;
  for (const auto& it : spec.at("frozen").items()) {
    const auto s = parse_state(it.value());
    frozen.emplace(it.key(), s.with_structure(TensorStructure::single(s.dim(), it.key())));
  }
  const auto m = marginal_channel(ch, target, frozen);
  const int d = m.in_dim();
  const Matrix image = m.apply(Matrix(identity(d) / static_cast<double>(d)));
  const double defect = unitality_defect(m);
  return {{"defect", number(defect)}, {"unital", defect <= 1e-9}, {"image_of_mixed", matrix_to_json(image)}};
}

Json check_witness(const Json& spec, const Context& c) {
  const auto rho = parse_state(spec.at("state"));
  const auto s1 = parse_set(spec.at("s1"));
  const auto s2 = parse_set(spec.at("s2"));
  WitnessOptions o;
  o.seed = c.seed;
  o.samples = spec.value("samples", o.samples);
  o.delta = spec.value("delta", o.delta);
  const auto w = witness_channel(rho, s1, s2, o);
  Json out = to_json(w);
  out["rho_image_in_s2"] = contains(s2, w.channel.apply(rho.matrix()), 1e-9);
  out["rho_image_min_pt_eigenvalue"] = number(
      eig_hermitian(partial_transpose(w.channel.apply(rho.matrix()), s2.structure(), 1)).values(0));
  return out;
}

Json check_nogo(const Json& spec, const Context& c) {
  const auto coherence = parse_set(spec.at("coherence"));
  if (!spec.contains("sampled")) return to_json(nogo_entanglement_to_coherence(parse_channel(spec.at("channel")), coherence));

  // Sampled resource non-generating channels of a composite set, built from
  // measure-and-prepare maps and their mixtures and compositions with an
  // optional base channel.
  const auto& sp = spec.at("sampled");
  const auto set = parse_set(sp.at("set"));
  const int n = sp.value("count", 50);
  const auto probe = parse_state(sp.at("probe"));
  std::optional<KrausChannel> base;
  if (spec.contains("channel")) base = parse_channel(spec.at("channel"));
  Rng rng(c.seed);
  const auto cls = FreeOpClass::rng(set);
  int verified = 0, passed = 0;
  double worst_basis = 0.0, worst_direct = 0.0, worst_probe = 0.0, worst_cond = 0.0;
  for (int k = 0; k < n; ++k) {
    KrausChannel ch = random_measure_prepare(set.structure(), set, rng, 2 + k % 3);
    if (base && k % 3 == 1) {
      const double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
      ch = mixture({*base, ch}, {w, 1.0 - w});
    } else if (base && k % 3 == 2) {
      ch = compose(ch, *base);
    }
    if (check_op_class(ch, cls, 1e-9, c.seed + static_cast<uint64_t>(k), sp.value("samples", 100)).passed) ++verified;
    const auto r = nogo_entanglement_to_coherence(ch, coherence);
    passed += r.passed ? 1 : 0;
    worst_basis = std::max(worst_basis, r.basis_offdiagonal);
    worst_direct = std::max(worst_direct, r.direct_offdiagonal);
    worst_cond = std::max(worst_cond, r.condition_number);
    Matrix m = marginal(ch.apply(probe.matrix()), ch.out_structure(), 0);
    if (coherence.kind() == SetKind::Incoherent) m = coherence.basis().adjoint() * m * coherence.basis();
    m.diagonal().setZero();
    worst_probe = std::max(worst_probe, m.norm());
  }
  return {{"count", n},
          {"rng_verified", verified},
          {"passed", passed},
          {"all_passed", passed == n && verified == n},
          {"max_basis_offdiagonal", number(worst_basis)},
          {"max_direct_offdiagonal", number(worst_direct)},
          {"max_probe_offdiagonal", number(worst_probe)},
          {"max_condition_number", number(worst_cond)}};
}

void run_counterexample(const Json& in, const Json&, const Context& c, Json& results) {
  for (const auto& spec : in.at("checks")) {
    const auto id = spec.at("id").get<std::string>();
    const auto op = spec.at("op").get<std::string>();
    if (op == "rng") {
      results[id] = check_rng(spec, c);
    } else if (op == "marginal_unitality") {
      results[id] = check_marginal_unitality(spec);
    } else if (op == "witness_channel") {
      results[id] = check_witness(spec, c);
    } else if (op == "nogo") {
      results[id] = check_nogo(spec, c);
    } else {
      throw SchemaError("unknown check op '" + op + "'");
    }
  }
}

using Handler = void (*)(const Json&, const Json&, const Context&, Json&);

Handler handler_for(const std::string& kind) {
  if (kind == "divergence") return run_divergence;
  if (kind == "single_shot") return run_single_shot;
  if (kind == "conversion") return run_conversion;
  if (kind == "assisted") return run_assisted;
  if (kind == "certification") return run_certification;
  if (kind == "axioms") return run_axioms;
  if (kind == "bp_axioms") return run_bp_axioms;
  return run_counterexample;
}

// --- expectations ---------------------------------------------------------------------

std::optional<double> as_number(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  return std::nullopt;
}

Json grade_one(const Json& e, const Json& report) {
  Json out{{"pointer", e.at("pointer")}, {"origin", e.at("origin")}};
  const Json::json_pointer ptr(e.at("pointer").get<std::string>());
  if (!report.contains(ptr)) {
    out["ok"] = false;
    out["reason"] = "missing";
    return out;
  }
  const Json& actual = report.at(ptr);
  out["actual"] = actual;
  bool ok = false;
  if (e.contains("equals")) {
    const auto a = as_number(actual), b = as_number(e.at("equals"));
    ok = actual == e.at("equals") || (a && b && actual.is_number() && *a == *b);
    out["expected"] = e.at("equals");
  } else {
    const auto a = as_number(actual);
    const double tol = e.value("tol", 0.0);
    if (!a) {
      out["ok"] = false;
      out["reason"] = "not numeric";
      return out;
    }
    if (e.contains("value")) {
      const double v = *as_number(e.at("value"));
      ok = (std::isinf(v) && *a == v) || std::abs(*a - v) <= tol;
      out["expected"] = e.at("value");
      out["tol"] = tol;
    } else if (e.contains("at_least")) {
      ok = *a >= *as_number(e.at("at_least")) - tol;
      out["at_least"] = e.at("at_least");
    } else {
      ok = *a <= *as_number(e.at("at_most")) + tol;
      out["at_most"] = e.at("at_most");
    }
  }
  out["ok"] = ok;
  return out;
}

void expect_type(const Json& j, const char* key, Json::value_t type, const char* what) {
  if (j.contains(key) && j.at(key).type() != type &&
      !(type == Json::value_t::number_float && j.at(key).is_number()))
    throw SchemaError(std::string("field '") + key + "' must be " + what);
}

}  // namespace

// --- public API ---------------------------------------------------------------------------

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Passed: return 0;
    case RunStatus::Failed: return 1;
    case RunStatus::SchemaViolation: return 2;
    case RunStatus::Numerical: return 3;
  }
  return 1;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Passed: return "passed";
    case RunStatus::Failed: return "failed";
    case RunStatus::SchemaViolation: return "schema_error";
    case RunStatus::Numerical: return "numerical_error";
  }
  return "failed";
}

RunStatus status_from_report(const Json& report) {
  const auto s = report.value("status", std::string("failed"));
  if (s == "passed") return RunStatus::Passed;
  if (s == "schema_error") return RunStatus::SchemaViolation;
  if (s == "numerical_error") return RunStatus::Numerical;
  return RunStatus::Failed;
}

void validate_scenario(const Json& s) {
  if (!s.is_object()) throw SchemaError("scenario must be a JSON object");
  static const std::set<std::string> allowed{"name",   "kind",   "description", "anchors", "seed",
                                             "inputs", "params", "expected",    "$schema"};
  for (const auto& it : s.items())
    if (!allowed.count(it.key())) throw SchemaError("unknown top-level field '" + it.key() + "'");
  for (const char* key : {"name", "kind", "seed", "inputs", "expected"})
    if (!s.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  expect_type(s, "name", Json::value_t::string, "a string");
  expect_type(s, "kind", Json::value_t::string, "a string");
  expect_type(s, "description", Json::value_t::string, "a string");
  expect_type(s, "inputs", Json::value_t::object, "an object");
  expect_type(s, "params", Json::value_t::object, "an object");
  expect_type(s, "expected", Json::value_t::array, "an array");
  if (!s.at("seed").is_number_unsigned()) throw SchemaError("field 'seed' must be a non-negative integer");
  if (!kKinds.count(s.at("kind").get<std::string>()))
    throw SchemaError("unknown kind '" + s.at("kind").get<std::string>() + "'");
  if (s.contains("anchors")) {
    if (!s.at("anchors").is_array()) throw SchemaError("field 'anchors' must be an array");
    for (const auto& a : s.at("anchors"))
      if (!a.is_string()) throw SchemaError("anchors must be strings");
  }
  static const std::set<std::string> origins{"worked-example", "derived", "trivial"};
  for (const auto& e : s.at("expected")) {
    if (!e.is_object() || !e.contains("pointer") || !e.at("pointer").is_string())
      throw SchemaError("every expectation needs a string 'pointer'");
    try {
      Json::json_pointer p(e.at("pointer").get<std::string>());
    } catch (const nlohmann::json::exception&) {
      throw SchemaError("malformed pointer '" + e.at("pointer").get<std::string>() + "'");
    }
    int ops = 0;
    for (const char* k : {"value", "equals", "at_least", "at_most"}) ops += e.contains(k) ? 1 : 0;
    if (ops != 1) throw SchemaError("expectation '" + e.at("pointer").get<std::string>() + "' needs exactly one comparison");
    if (e.contains("tol") && !(e.at("tol").is_number() && e.at("tol").get<double>() >= 0.0))
      throw SchemaError("'tol' must be a non-negative number");
    if (!e.contains("origin") || !e.at("origin").is_string() || !origins.count(e.at("origin").get<std::string>()))
      throw SchemaError("expectation origin must be one of worked-example, derived, trivial");
  }

  const auto& in = s.at("inputs");
  const auto need = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (!in.contains(k)) throw SchemaError(std::string("inputs.") + k + " is required for this kind");
  };
  const auto kind = s.at("kind").get<std::string>();
  if (kind == "divergence") need({"state", "set"});
  if (kind == "single_shot") need({"locals"});
  if (kind == "conversion") need({"input", "target"});
  if (kind == "assisted") need({"state", "b_set", "golden"});
  if (kind == "certification") need({"state"});
  if (kind == "axioms") need({"candidate", "locals"});
  if (kind == "bp_axioms") need({"family"});
  if (kind == "counterexample") {
    need({"checks"});
    if (!in.at("checks").is_array()) throw SchemaError("inputs.checks must be an array");
    std::set<std::string> ids;
    for (const auto& c : in.at("checks")) {
      if (!c.contains("id") || !c.contains("op")) throw SchemaError("every check needs 'id' and 'op'");
      if (!ids.insert(c.at("id").get<std::string>()).second) throw SchemaError("duplicate check id");
    }
  }
}

void grade_report(const Json& scenario, Json& report) {
  Json graded = Json::array();
  bool all = true;
  for (const auto& e : scenario.at("expected")) {
    auto g = grade_one(e, report);
    all = all && g.at("ok").get<bool>();
    graded.push_back(std::move(g));
  }
  report["expectations"] = graded;
  report["status"] = to_string(all ? RunStatus::Passed : RunStatus::Failed);
}

Json run_scenario(const Json& scenario, const RunOptions& options) {
  validate_scenario(scenario);
  Context ctx;
  ctx.seed = options.seed.value_or(scenario.at("seed").get<uint64_t>());
  const Json params = scenario.value("params", Json::object());
  ctx.gap = options.gap.value_or(params.value("gap", 1e-4));

  Json report{{"scenario", scenario.at("name")},
              {"kind", scenario.at("kind")},
              {"seed", ctx.seed},
              {"gap", ctx.gap},
              {"version", toolkit_version()}};
  Json results = Json::object();
  const auto start = std::chrono::steady_clock::now();
  try {
    handler_for(scenario.at("kind").get<std::string>())(scenario.at("inputs"), params, ctx, results);
  } catch (const NumericalError& e) {
    report["results"] = results;
    report["status"] = to_string(RunStatus::Numerical);
    report["error"] = e.what();
  } catch (const SchemaError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("inputs: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("inputs: ") + e.what());
  }
  report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (report.contains("status")) return report;
  report["results"] = results;
  grade_report(scenario, report);
  return report;
}

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (const auto* b = kBuiltins; b->name; ++b) out.emplace_back(b->name);
  std::sort(out.begin(), out.end());
  return out;
}

Json builtin_scenario(const std::string& name) {
  for (const auto* b = kBuiltins; b->name; ++b)
    if (name == b->name) return Json::parse(b->text);
  throw std::out_of_range("no built-in scenario named '" + name + "'");
}

Json load_scenario(const std::string& path_or_name) {
  std::ifstream f(path_or_name);
  if (!f) {
    try {
      return builtin_scenario(path_or_name);
    } catch (const std::out_of_range& e) {
      throw SchemaError(std::string(e.what()) + " and no such file");
    }
  }
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path_or_name + ": " + e.what());
  }
}

std::string scenario_schema_text() { return kSchemaText; }

std::string toolkit_version() { return RESCOMP_VERSION; }

std::vector<std::pair<std::string, std::string>> flatten_results(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  const auto walk = [&](auto&& self, const Json& j, const std::string& prefix) -> void {
    if (j.is_object()) {
      if (j.contains("dim") && j.contains("re")) return;
      for (const auto& it : j.items()) self(self, it.value(), prefix + "/" + it.key());
    } else if (j.is_array()) {
      for (size_t i = 0; i < j.size(); ++i) self(self, j[i], prefix + "/" + std::to_string(i));
    } else if (j.is_number() || j.is_boolean() || j.is_string()) {
      std::ostringstream os;
      if (j.is_number_float()) {
        os.precision(17);
        os << j.get<double>();
      } else {
        os << (j.is_string() ? j.get<std::string>() : j.dump());
      }
      rows.emplace_back(prefix, os.str());
    }
  };
  if (report.contains("results")) walk(walk, report.at("results"), "/results");
  return rows;
}

}  // namespace rescomp
