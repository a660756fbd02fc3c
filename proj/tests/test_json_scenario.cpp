#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "rescomp/scenario.hpp"

using namespace rescomp;

namespace {

Json minimal_divergence() {
  return Json::parse(R"({
    "name": "tiny", "kind": "divergence", "seed": 3,
    "inputs": {"state": {"named": "plus"}, "set": {"kind": "incoherent", "dim": 2}},
    "params": {"quantities": ["relative_entropy"]},
    "expected": [{"pointer": "/results/relative_entropy/value", "value": 1.0, "tol": 1e-9, "origin": "trivial"}]
  })");
}

}  // namespace

TEST(JsonIo, MatrixRoundTrip) {
  Rng rng(80);
  const Matrix m = random_density(3, rng);
  EXPECT_LT((matrix_from_json(matrix_to_json(m)) - m).norm(), 1e-15);
  EXPECT_THROW(matrix_from_json(Json::parse(R"({"dim": 2, "re": [1, 0, 0]})")), SchemaError);
}

TEST(JsonIo, NumbersEncodeInfinity) {
  EXPECT_EQ(number(kInfinity), "inf");
  EXPECT_EQ(number(-kInfinity), "-inf");
  EXPECT_EQ(number(0.5), 0.5);
}

TEST(JsonIo, StateDescriptors) {
  EXPECT_LT((parse_state(Json::parse(R"({"named": "plus"})")).matrix() - plus_state().matrix()).norm(), 1e-15);
  const auto phi = parse_state(Json::parse(R"({"named": "phi_plus"})"));
  EXPECT_EQ(phi.dim(), 4);
  const auto t = parse_state(Json::parse(R"({"tensor": [{"named": "zero"}, {"named": "phi_plus"}]})"));
  EXPECT_EQ(t.structure().size(), 3u);
  const auto mix = parse_state(Json::parse(R"({"mixture": [{"named": "zero"}, {"named": "one"}], "weights": [0.5, 0.5]})"));
  EXPECT_LT((mix.matrix() - maximally_mixed(2).matrix()).norm(), 1e-15);
  const auto r1 = parse_state(Json::parse(R"({"random": {"dim": 3, "seed": 9}})"));
  const auto r2 = parse_state(Json::parse(R"({"random": {"dim": 3, "seed": 9}})"));
  EXPECT_EQ((r1.matrix() - r2.matrix()).norm(), 0.0);
  const auto pure = parse_state(Json::parse(R"({"random": {"dim": 4, "seed": 1, "rank": 1, "dims": [2, 2]}})"));
  EXPECT_NEAR(oracle::entropy(pure.matrix()), 0.0, 1e-9);
  EXPECT_THROW(parse_state(Json::parse(R"({"named": "sparkly"})")), SchemaError);
  EXPECT_THROW(parse_state(Json::parse(R"({"mixture": [{"named": "zero"}], "weights": [0.5, 0.5]})")), SchemaError);
}

TEST(JsonIo, SetChannelAndClassDescriptors) {
  EXPECT_EQ(parse_set(Json::parse(R"({"kind": "incoherent", "dim": 3})")).dim(), 3);
  const auto sm = parse_set(Json::parse(R"({"kind": "smin", "locals": [{"kind": "incoherent", "dim": 2},
      {"kind": "separable", "dims": [2, 2], "labels": ["A", "B"]}], "labels": ["1", "AB"]})"));
  EXPECT_EQ(sm.dim(), 8);
  EXPECT_EQ(sm.structure().labels(), (std::vector<std::string>{"1", "A", "B"}));
  EXPECT_THROW(parse_set(Json::parse(R"({"kind": "octagonal"})")), SchemaError);

  const auto ch = parse_channel(Json::parse(R"({"named": "coherence_to_entanglement"})"));
  EXPECT_EQ(ch.in_dim(), 8);
  const auto comp = parse_channel(Json::parse(R"({"compose": [{"named": "pauli_x"}, {"named": "pauli_x"}]})"));
  EXPECT_LT((comp.apply(plus_state().matrix()) - plus_state().matrix()).norm(), 1e-14);
  EXPECT_THROW(parse_channel(Json::parse(R"({"kraus": [{"dim": 2, "re": [1, 0]}]})")), SchemaError);
  // Well-formed but unphysical operators are rejected by the channel itself.
  EXPECT_THROW(parse_channel(Json::parse(R"({"kraus": [{"dim": 2, "re": [2, 0, 0, 2]}]})")), std::invalid_argument);

  EXPECT_EQ(parse_op_class(Json::parse(R"({"kind": "sio"})")).kind, OpKind::SIO);
  EXPECT_EQ(parse_op_class(Json::parse(R"({"kind": "lfocc", "parties": {"A": {"kind": "sio"}}})")).kind, OpKind::Lfocc);
  EXPECT_EQ(parse_test_class("real"), TestClass::Real);
  EXPECT_THROW(parse_test_class("imaginary"), SchemaError);
}

TEST(Scenario, ValidationRejectsMalformedDocuments) {
  EXPECT_NO_THROW(validate_scenario(minimal_divergence()));
  auto j = minimal_divergence();
  j.erase("seed");
  EXPECT_THROW(validate_scenario(j), SchemaError);
  j = minimal_divergence();
  j["kind"] = "astrology";
  EXPECT_THROW(validate_scenario(j), SchemaError);
  j = minimal_divergence();
  j["expected"][0]["equals"] = 1.0;
  EXPECT_THROW(validate_scenario(j), SchemaError);
  j = minimal_divergence();
  j["expected"][0]["pointer"] = "no-slash";
  EXPECT_THROW(validate_scenario(j), SchemaError);
  j = minimal_divergence();
  j["unexpected"] = true;
  EXPECT_THROW(validate_scenario(j), SchemaError);
  j = minimal_divergence();
  j["inputs"].erase("set");
  EXPECT_THROW(run_scenario(j), SchemaError);
}

TEST(Scenario, GradingAndStatuses) {
  auto report = run_scenario(minimal_divergence());
  EXPECT_EQ(report.at("status"), "passed");
  EXPECT_EQ(status_from_report(report), RunStatus::Passed);
  EXPECT_EQ(report.at("seed"), 3);
  auto wrong = minimal_divergence();
  wrong["expected"][0]["value"] = 0.25;
  const auto bad = run_scenario(wrong);
  EXPECT_EQ(bad.at("status"), "failed");
  EXPECT_EQ(exit_code(status_from_report(bad)), 1);
  EXPECT_EQ(exit_code(RunStatus::SchemaViolation), 2);
  EXPECT_EQ(exit_code(RunStatus::Numerical), 3);
  auto missing = minimal_divergence();
  missing["expected"][0]["pointer"] = "/results/nothing_here";
  EXPECT_EQ(run_scenario(missing).at("status"), "failed");
}

TEST(Scenario, SeedOverrideAndDeterminism) {
  const auto s = builtin_scenario("werner_entanglement");
  auto a = run_scenario(s);
  auto b = run_scenario(s);
  a.erase("wall_time");
  b.erase("wall_time");
  EXPECT_EQ(a, b);
  RunOptions o;
  o.seed = 99;
  EXPECT_EQ(run_scenario(minimal_divergence(), o).at("seed"), 99);
}

TEST(Scenario, BuiltinsAndFiles) {
  const auto names = builtin_scenarios();
  EXPECT_GE(names.size(), 14u);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_THROW(builtin_scenario("does_not_exist"), std::out_of_range);
  for (const auto& n : names) {
    EXPECT_NO_THROW(validate_scenario(builtin_scenario(n))) << n;
    const auto path = std::filesystem::path(RESCOMP_SCENARIO_DIR) / (n + ".json");
    EXPECT_EQ(load_scenario(path.string()), builtin_scenario(n)) << n;
  }
  EXPECT_EQ(load_scenario("coherence_plus").at("name"), "coherence_plus");
  const auto tmp = std::filesystem::temp_directory_path() / "rescomp_broken.json";
  std::ofstream(tmp) << "{ not json";
  EXPECT_THROW(load_scenario(tmp.string()), SchemaError);
  std::filesystem::remove(tmp);
  EXPECT_TRUE(Json::parse(scenario_schema_text()).is_object());
  EXPECT_FALSE(toolkit_version().empty());
}

TEST(Scenario, FlattenedRows) {
  const auto rows = flatten_results(run_scenario(minimal_divergence()));
  bool found = false;
  for (const auto& [ptr, val] : rows) found |= ptr == "/results/relative_entropy/value";
  EXPECT_TRUE(found);
}
