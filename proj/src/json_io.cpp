#include "rescomp/json_io.hpp"

#include <cmath>

namespace rescomp {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.is_object() && j.contains(key) ? get<T>(j, key) : fallback;
}

std::vector<int> dims_or(const Json& j, const char* key, int total) {
  if (j.contains(key)) return get<std::vector<int>>(j, key);
  return {total};
}

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

TensorStructure structure_from_dims(const std::vector<int>& dims, const std::vector<std::string>& labels) {
  if (dims.empty()) throw SchemaError("empty dimension list");
  if (!labels.empty() && labels.size() != dims.size()) throw SchemaError("labels and dims differ in length");
  std::vector<Party> parties;
  for (size_t i = 0; i < dims.size(); ++i)
    parties.push_back({labels.empty() ? std::to_string(i + 1) : labels[i], dims[i]});
  return TensorStructure(std::move(parties));
}

// --- matrices ------------------------------------------------------------------

Json matrix_to_json(const Matrix& m) {
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return {{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json& j) {
  const int d = get<int>(j, "dim");
  if (d <= 0 || d > 64) throw SchemaError("matrix dimension out of range");
  const auto re = get<std::vector<double>>(j, "re");
  const auto im = j.contains("im") ? get<std::vector<double>>(j, "im") : std::vector<double>(re.size(), 0.0);
  if (re.size() != static_cast<size_t>(d * d) || im.size() != re.size())
    throw SchemaError("matrix literal has " + std::to_string(re.size()) + " entries, expected " + std::to_string(d * d));
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(re[static_cast<size_t>(r * d + c)], im[static_cast<size_t>(r * d + c)]);
  return m;
}

// --- states --------------------------------------------------------------------

DensityOperator parse_state(const Json& j) {
  if (!j.is_object()) throw SchemaError("state descriptor must be an object");
  if (j.contains("named")) {
    const auto name = get<std::string>(j, "named");
    const int d = get_or<int>(j, "dim", 2);
    if (name == "zero") return basis_state(d, 0);
    if (name == "one") return basis_state(d, 1);
    if (name == "plus") return plus_state();
    if (name == "minus") return minus_state();
    if (name == "plus_y") return plus_y_state();
    if (name == "phi_plus") return maximally_entangled(d);
    if (name == "maximally_mixed") {
      const auto dims = dims_or(j, "dims", d);
      int total = 1;
      for (int x : dims) total *= x;
      return DensityOperator(identity(total) / static_cast<double>(total), structure_from_dims(dims));
    }
    throw SchemaError("unknown named state '" + name + "'");
  }
  if (j.contains("basis")) {
    const int d = get<int>(j, "dim");
    const int i = get<int>(j, "basis");
    if (i < 0 || i >= d) throw SchemaError("basis index out of range");
    const auto dims = dims_or(j, "dims", d);
    return DensityOperator(basis_projector(d, i), structure_from_dims(dims));
  }
  if (j.contains("matrix")) {
    const Matrix m = matrix_from_json(field(j, "matrix"));
    const auto dims = dims_or(j, "dims", static_cast<int>(m.rows()));
    return DensityOperator(m, structure_from_dims(dims, get_or<std::vector<std::string>>(j, "labels", {})));
  }
  if (j.contains("tensor")) {
    std::vector<DensityOperator> fs;
    int k = 0;
    for (const auto& f : field(j, "tensor")) {
      auto s = parse_state(f);
      std::vector<Party> ps;
      // Prefix labels with the factor index so repeated factors stay distinct.
      for (const auto& p : s.structure().parties()) ps.push_back({std::to_string(++k), p.dim});
      fs.push_back(s.with_structure(TensorStructure(std::move(ps))));
    }
    if (fs.empty()) throw SchemaError("empty tensor product");
    return tensor(fs);
  }
  if (j.contains("mixture")) {
    const auto ws = get<std::vector<double>>(j, "weights");
    const auto& items = field(j, "mixture");
    if (!items.is_array() || items.size() != ws.size() || ws.empty()) throw SchemaError("mixture and weights differ");
    auto first = parse_state(items[0]);
    Matrix m = ws[0] * first.matrix();
    for (size_t i = 1; i < ws.size(); ++i) m += ws[i] * parse_state(items[i]).matrix();
    return DensityOperator(m, first.structure());
  }
  if (j.contains("random")) {
    const auto& r = field(j, "random");
    const int d = get<int>(r, "dim");
    Rng rng(get_or<uint64_t>(r, "seed", 1));
    const Matrix m = random_density(d, rng, get_or<int>(r, "rank", -1));
    return DensityOperator(m, structure_from_dims(dims_or(r, "dims", d)));
  }
  throw SchemaError("unrecognized state descriptor");
}

// --- sets ------------------------------------------------------------------------

FreeStateSet parse_set(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "incoherent" || kind == "real" || kind == "all_states") {
    const int d = get<int>(j, "dim");
    const Matrix basis = j.contains("basis") ? matrix_from_json(j.at("basis")) : Matrix();
    if (kind == "incoherent") return FreeStateSet::incoherent(d, basis);
    if (kind == "real") return FreeStateSet::real(d, basis);
    return FreeStateSet::all_states(d);
  }
  if (kind == "singleton") return FreeStateSet::singleton(parse_state(field(j, "state")));
  if (kind == "separable") {
    const auto dims = get<std::vector<int>>(j, "dims");
    return FreeStateSet::separable(structure_from_dims(dims, get_or<std::vector<std::string>>(j, "labels", {"A", "B"})));
  }
  if (kind == "smin" || kind == "smax") {
    std::vector<FreeStateSet> locals;
    for (const auto& l : field(j, "locals")) locals.push_back(parse_set(l));
    if (locals.size() < 2) throw SchemaError("composite sets need at least two locals");
    const auto labels = get_or<std::vector<std::string>>(j, "labels", {});
    return kind == "smin" ? smin(locals, labels) : smax(locals, labels);
  }
  if (kind == "hull") {
    std::vector<Matrix> pts;
    for (const auto& p : field(j, "points")) pts.push_back(parse_state(p).matrix());
    return FreeStateSet::hull(pts);
  }
  throw SchemaError("unknown set kind '" + kind + "'");
}

// --- channels --------------------------------------------------------------------

KrausChannel parse_channel(const Json& j) {
  if (!j.is_object()) throw SchemaError("channel descriptor must be an object");
  if (j.contains("named")) {
    const auto name = get<std::string>(j, "named");
    const int d = get_or<int>(j, "dim", 2);
    if (name == "identity") return KrausChannel::identity(structure_from_dims(dims_or(j, "dims", d)));
    if (name == "pauli_x") return pauli_x_channel();
    if (name == "dephasing") return dephasing_channel(d);
    if (name == "coherence_to_entanglement") return coherence_to_entanglement_map();
    if (name == "reset_to_zero") return reset_to_zero_map();
    throw SchemaError("unknown named channel '" + name + "'");
  }
  if (j.contains("unitary")) {
    const Matrix u = matrix_from_json(field(j, "unitary"));
    return KrausChannel::unitary(u, structure_from_dims(dims_or(j, "dims", static_cast<int>(u.rows()))));
  }
  if (j.contains("rz")) return KrausChannel::unitary(rz(get<double>(j, "rz")), TensorStructure::single(2, "A"));
  if (j.contains("replacement")) {
    const auto s = parse_state(field(j, "replacement"));
    return KrausChannel::replacement(structure_from_dims(get<std::vector<int>>(j, "in_dims")), s);
  }
  if (j.contains("kraus")) {
    std::vector<Matrix> ks;
    for (const auto& k : field(j, "kraus")) {
      // Rectangular operators use {"rows", "cols", "re", "im"}.
      if (k.contains("rows")) {
        const int r = get<int>(k, "rows"), c = get<int>(k, "cols");
        const auto re = get<std::vector<double>>(k, "re");
        const auto im = k.contains("im") ? get<std::vector<double>>(k, "im") : std::vector<double>(re.size(), 0.0);
        if (re.size() != static_cast<size_t>(r * c) || im.size() != re.size()) throw SchemaError("kraus literal size");
        Matrix m(r, c);
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < c; ++b) m(a, b) = Complex(re[static_cast<size_t>(a * c + b)], im[static_cast<size_t>(a * c + b)]);
        ks.push_back(m);
      } else {
        ks.push_back(matrix_from_json(k));
      }
    }
    if (ks.empty()) throw SchemaError("empty Kraus family");
    const auto in = get_or<std::vector<int>>(j, "in_dims", {static_cast<int>(ks.front().cols())});
    const auto out = get_or<std::vector<int>>(j, "out_dims", {static_cast<int>(ks.front().rows())});
    return KrausChannel(ks, structure_from_dims(in), structure_from_dims(out));
  }
  if (j.contains("tensor")) {
    std::vector<KrausChannel> parts;
    for (const auto& c : field(j, "tensor")) parts.push_back(parse_channel(c));
    if (parts.empty()) throw SchemaError("empty channel tensor");
    return fmin_element(parts);
  }
  if (j.contains("compose")) {
    const auto& items = field(j, "compose");
    if (!items.is_array() || items.empty()) throw SchemaError("empty composition");
    KrausChannel acc = parse_channel(items[0]);
    for (size_t i = 1; i < items.size(); ++i) acc = compose(parse_channel(items[i]), acc);
    return acc;
  }
  throw SchemaError("unrecognized channel descriptor");
}

FreeOpClass parse_op_class(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  const Matrix basis = j.contains("basis") ? matrix_from_json(j.at("basis")) : Matrix();
  if (kind == "sio") return FreeOpClass::sio(basis);
  if (kind == "real_ops") return FreeOpClass::real_ops(basis);
  if (kind == "unital") return FreeOpClass::unital();
  if (kind == "all_ops") return FreeOpClass::all_ops();
  if (kind == "rng") return FreeOpClass::rng(parse_set(field(j, "set")));
  if (kind == "lfocc") {
    std::vector<std::pair<std::string, FreeOpClass>> per;
    for (const auto& it : field(j, "parties").items()) per.emplace_back(it.key(), parse_op_class(it.value()));
    return FreeOpClass::lfocc(std::move(per));
  }
  throw SchemaError("unknown operation class '" + kind + "'");
}

TestClass parse_test_class(const std::string& s) {
  if (s == "all") return TestClass::All;
  if (s == "diagonal") return TestClass::Diagonal;
  if (s == "real") return TestClass::Real;
  throw SchemaError("unknown test class '" + s + "'");
}

// --- reports ---------------------------------------------------------------------

Json to_json(const DivergenceResult& r, bool with_optimizer) {
  Json j{{"value", number(r.value)},
         {"lower_bound", number(r.lower_bound)},
         {"upper_bound", number(r.upper_bound)},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"certified", r.certified},
         {"method", r.method}};
  if (!r.note.empty()) j["note"] = r.note;
  if (with_optimizer && r.optimizer.size() > 0) j["optimizer"] = matrix_to_json(r.optimizer);
  return j;
}

Json to_json(const BoundReport& r) {
  Json j{{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"verdict", to_string(r.verdict)}};
  j["gaps"] = {number(r.lhs.gap()), number(r.rhs.gap())};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const RateBound& r) {
  return {{"value", number(r.value)},         {"lower_bound", number(r.lower_bound)},
          {"upper_bound", number(r.upper_bound)}, {"numerator", to_json(r.numerator)},
          {"denominator", to_json(r.denominator)}, {"unconstrained", r.unconstrained}};
}

Json to_json(const ReductionReport& r) {
  return {{"local", to_json(r.local)},
          {"min", to_json(r.min_value)},
          {"max", to_json(r.max_value)},
          {"consistent", r.consistent}};
}

Json to_json(const ConditionVerdict& v) {
  Json j{{"name", v.name}, {"passed", v.passed}, {"mode", v.mode}, {"checked", v.checked}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.counterexample_state) j["counterexample"] = matrix_to_json(*v.counterexample_state);
  return j;
}

Json to_json(const AxiomReport& r) {
  Json conds = Json::object();
  for (const auto& c : r.conditions) conds[c.name] = to_json(c);
  return {{"passed", r.passed()}, {"seed", r.seed}, {"conditions", conds}};
}

Json to_json(const BpReport& r) {
  Json ax = Json::object();
  for (const auto& c : r.axioms) ax[c.name] = to_json(c);
  return {{"passed", r.passed()}, {"seed", r.seed}, {"axioms", ax}};
}

Json to_json(const CertReport& r) {
  Json j{{"value", number(r.value)},   {"ceiling", number(r.ceiling)}, {"floor", number(r.floor)},
         {"alpha", number(r.alpha)},   {"beta", number(r.beta)},
         {"achiever", {{"channel_id", r.achiever}}}};
  if (r.test.size() > 0) j["achiever"]["P"] = matrix_to_json(r.test);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const OpCheck& c) {
  Json j{{"passed", c.passed}, {"mode", c.mode}, {"checked", c.checked}};
  if (!c.note.empty()) j["note"] = c.note;
  if (c.counterexample) j["counterexample"] = matrix_to_json(*c.counterexample);
  return j;
}

Json to_json(const NogoReport& r) {
  return {{"passed", r.passed},
          {"basis_size", r.basis_size},
          {"condition_number", number(r.condition_number)},
          {"basis_offdiagonal", number(r.basis_offdiagonal)},
          {"direct_offdiagonal", number(r.direct_offdiagonal)},
          {"reconstruction_error", number(r.reconstruction_error)},
          {"detail", r.detail}};
}

Json to_json(const WitnessChannel& w) {
  return {{"p_star", number(w.p_star)},
          {"rho_value", number(w.rho_value)},
          {"free_infimum", number(w.free_infimum)},
          {"verified", w.verified},
          {"witness", matrix_to_json(w.witness)}};
}

Json to_json(const InducedMonotone& m) {
  return {{"value", number(m.value)},       {"estimate", number(m.estimate)}, {"detected", m.detected},
          {"best_channel", m.best_channel}, {"evaluated", m.evaluated},       {"certified", m.certified}};
}

}  // namespace rescomp
