// Command-line front end for scenario files.
//
//   rescomp run <file|builtin> [--seed N] [--gap G] [--format json|csv] [--out PATH]
//   rescomp suite [dir] [--jobs N] ...
//   rescomp describe [name]
//   rescomp schema
//
// Exit codes: 0 all expectations met, 1 an expectation failed, 2 schema
// violation, 3 numerical failure (the partial report is still written).

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rescomp/scenario.hpp"

namespace fs = std::filesystem;
using rescomp::Json;
using rescomp::RunStatus;

namespace {

struct Common {
  std::optional<uint64_t> seed;
  std::optional<double> gap;
  std::string format = "json";
  std::string out;
};

rescomp::RunOptions run_options(const Common& c) { return {c.seed, c.gap}; }

struct Entry {
  std::string source;
  Json report;
  RunStatus status = RunStatus::Failed;
};

Entry run_one(const std::string& source, const Common& c) {
  Entry e;
  e.source = source;
  try {
    const Json scenario = rescomp::load_scenario(source);
    e.report = rescomp::run_scenario(scenario, run_options(c));
    e.status = rescomp::status_from_report(e.report);
  } catch (const rescomp::SchemaError& err) {
    e.report = {{"scenario", source}, {"status", "schema_error"}, {"error", err.what()}};
    e.status = RunStatus::SchemaViolation;
  } catch (const std::exception& err) {
    e.report = {{"scenario", source}, {"status", "numerical_error"}, {"error", err.what()}};
    e.status = RunStatus::Numerical;
  }
  return e;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

std::string render(const std::vector<Entry>& entries, const Json& json_doc, const std::string& format) {
  if (format == "json") return json_doc.dump(2) + "\n";
  std::ostringstream os;
  os << "scenario,status,pointer,value\n";
  for (const auto& e : entries) {
    const auto name = e.report.value("scenario", e.source);
    const auto status = e.report.value("status", std::string("failed"));
    const auto rows = rescomp::flatten_results(e.report);
    if (rows.empty()) os << csv_escape(name) << "," << status << ",,\n";
    for (const auto& [ptr, value] : rows)
      os << csv_escape(name) << "," << status << "," << csv_escape(ptr) << "," << csv_escape(value) << "\n";
  }
  return os.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

int worst_exit(const std::vector<Entry>& entries) {
  bool schema = false, numerical = false, failed = false;
  for (const auto& e : entries) {
    schema = schema || e.status == RunStatus::SchemaViolation;
    numerical = numerical || e.status == RunStatus::Numerical;
    failed = failed || e.status == RunStatus::Failed;
  }
  if (schema) return 2;
  if (numerical) return 3;
  return failed ? 1 : 0;
}

std::vector<std::string> suite_sources(const std::string& dir) {
  std::vector<std::string> sources;
  if (dir.empty()) return rescomp::builtin_scenarios();
  if (!fs::is_directory(dir)) throw rescomp::SchemaError(dir + " is not a directory");
  for (const auto& p : fs::directory_iterator(dir))
    if (p.is_regular_file() && p.path().extension() == ".json") sources.push_back(p.path().string());
  std::sort(sources.begin(), sources.end());
  return sources;
}

std::vector<Entry> run_pool(const std::vector<std::string>& sources, const Common& c, int jobs) {
  std::vector<Entry> entries(sources.size());
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    for (size_t i = next++; i < sources.size(); i = next++) entries[i] = run_one(sources[i], c);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(sources.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return entries;
}

int describe(const std::string& name) {
  if (name.empty()) {
    for (const auto& n : rescomp::builtin_scenarios()) {
      const auto s = rescomp::builtin_scenario(n);
      std::cout << n << " [" << s.value("kind", "") << "] " << s.value("description", "") << "\n";
    }
    return 0;
  }
  const Json s = rescomp::load_scenario(name);
  rescomp::validate_scenario(s);
  std::cout << s.at("name").get<std::string>() << " (" << s.at("kind").get<std::string>() << ", seed "
            << s.at("seed") << ")\n";
  if (s.contains("description")) std::cout << "  " << s.at("description").get<std::string>() << "\n";
  if (s.contains("anchors")) {
    std::cout << "anchors:\n";
    for (const auto& a : s.at("anchors")) std::cout << "  - " << a.get<std::string>() << "\n";
  }
  std::cout << "expected:\n";
  for (const auto& e : s.at("expected")) {
    std::cout << "  " << e.at("pointer").get<std::string>();
    for (const char* k : {"value", "equals", "at_least", "at_most"})
      if (e.contains(k)) std::cout << " " << k << " " << e.at(k).dump();
    if (e.contains("tol")) std::cout << " tol " << e.at("tol").dump();
    std::cout << " [" << e.at("origin").get<std::string>() << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite resource theory toolkit: scenario runner"};
  app.set_version_flag("--version", rescomp::toolkit_version());
  app.require_subcommand(1);

  Common common;
  std::string target, dir, name;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Override the scenario seed");
    sub->add_option("--gap", common.gap, "Duality-gap target for iterative solvers")->check(CLI::PositiveNumber);
    sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", common.out, "Write the report to a file instead of stdout");
  };

  auto* run = app.add_subcommand("run", "Run one scenario file or built-in scenario");
  run->add_option("scenario", target, "Path or built-in name")->required();
  add_common(run);

  auto* suite = app.add_subcommand("suite", "Run every scenario in a directory (built-ins when omitted)");
  suite->add_option("dir", dir, "Directory of *.json scenarios");
  suite->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(suite);

  auto* desc = app.add_subcommand("describe", "Show a scenario's anchors and expectations");
  desc->add_option("name", name, "Path or built-in name; lists built-ins when omitted");

  app.add_subcommand("schema", "Print the scenario JSON schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto e = run_one(target, common);
      emit(render({e}, e.report, common.format), common.out);
      if (e.status != RunStatus::Passed && e.report.contains("error"))
        std::cerr << "rescomp: " << e.report.at("error").get<std::string>() << "\n";
      return rescomp::exit_code(e.status);
    }
    if (*suite) {
      const auto entries = run_pool(suite_sources(dir), common, jobs);
      Json summary = Json::array();
      Json reports = Json::array();
      int passed = 0;
      for (const auto& e : entries) {
        passed += e.status == RunStatus::Passed ? 1 : 0;
        Json row{{"scenario", e.report.value("scenario", e.source)}, {"status", rescomp::to_string(e.status)}};
        if (e.report.contains("wall_time")) row["wall_time"] = e.report.at("wall_time");
        if (e.report.contains("error")) row["error"] = e.report.at("error");
        summary.push_back(row);
        reports.push_back(e.report);
      }
      const int code = worst_exit(entries);
      const Json doc{{"total", entries.size()},
                     {"passed", passed},
                     {"status", code == 0 ? "passed" : "failed"},
                     {"summary", summary},
                     {"reports", reports}};
      emit(render(entries, doc, common.format), common.out);
      for (const auto& row : summary)
        std::cerr << row.at("status").get<std::string>() << "  " << row.at("scenario").get<std::string>() << "\n";
      return code;
    }
    if (*desc) return describe(name);
    std::cout << rescomp::scenario_schema_text();
    return 0;
  } catch (const rescomp::SchemaError& e) {
    std::cerr << "rescomp: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rescomp: " << e.what() << "\n";
    return 3;
  }
}
