#pragma once

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "rescomp/certify.hpp"
#include "rescomp/composite.hpp"
#include "rescomp/laws.hpp"

namespace rescomp {

using Json = nlohmann::json;

/// Malformed descriptor; the CLI maps it to the schema-violation exit code.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix literal: {"dim": d, "re": [row-major], "im": [row-major]}; "im" may be omitted.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// State descriptors:
///   {"named": "zero"|"one"|"plus"|"minus"|"plus_y"|"phi_plus"|"maximally_mixed", "dim": d}
///   {"basis": i, "dim": d}
///   {"matrix": <literal>, "dims": [..]}
///   {"tensor": [<state>, ...]}
///   {"mixture": [<state>, ...], "weights": [..]}
///   {"random": {"dim": d, "seed": s, "rank": r, "dims": [..]}}
DensityOperator parse_state(const Json& j);

/// Set descriptors:
///   {"kind": "incoherent"|"real"|"all_states", "dim": d, "basis": <literal>?}
///   {"kind": "singleton", "state": <state>}
///   {"kind": "separable", "dims": [a, b], "labels": [..]?}
///   {"kind": "smin"|"smax", "locals": [<set>, ...], "labels": [..]?}
///   {"kind": "hull", "points": [<state>, ...]}
FreeStateSet parse_set(const Json& j);

/// Channel descriptors:
///   {"named": "identity"|"pauli_x"|"dephasing"|"coherence_to_entanglement"|"reset_to_zero", "dim": d?}
///   {"unitary": <literal>, "dims": [..]}
///   {"rz": theta}
///   {"replacement": <state>, "in_dims": [..]}
///   {"kraus": [<literal>, ...], "in_dims": [..], "out_dims": [..]}
///   {"tensor": [<channel>, ...]}
///   {"compose": [<channel applied first>, ...]}
KrausChannel parse_channel(const Json& j);

/// {"kind": "sio"|"real_ops"|"unital"|"all_ops"} or {"kind": "rng", "set": <set>}
/// or {"kind": "lfocc", "parties": {"A": <class>, ...}}.
FreeOpClass parse_op_class(const Json& j);

TestClass parse_test_class(const std::string& s);

TensorStructure structure_from_dims(const std::vector<int>& dims, const std::vector<std::string>& labels = {});

Json to_json(const DivergenceResult& r, bool with_optimizer = false);
Json to_json(const BoundReport& r);
Json to_json(const RateBound& r);
Json to_json(const ReductionReport& r);
Json to_json(const ConditionVerdict& v);
Json to_json(const AxiomReport& r);
Json to_json(const BpReport& r);
Json to_json(const CertReport& r);
Json to_json(const OpCheck& c);
Json to_json(const NogoReport& r);
Json to_json(const WitnessChannel& w);
Json to_json(const InducedMonotone& m);

/// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
Json number(double x);

}  // namespace rescomp
