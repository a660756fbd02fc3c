#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescomp/json_io.hpp"

namespace rescomp {

/// Overrides applied on top of a scenario file.
struct RunOptions {
  std::optional<uint64_t> seed;
  std::optional<double> gap;
};

enum class RunStatus { Passed, Failed, SchemaViolation, Numerical };

/// Process exit code for a status: 0, 1, 2, 3.
int exit_code(RunStatus s);
std::string to_string(RunStatus s);
RunStatus status_from_report(const Json& report);

/// Throws SchemaError naming the first offending field.
void validate_scenario(const Json& scenario);

/// Runs one scenario. Schema errors propagate as SchemaError; numerical
/// failures are caught and reported with status "numerical_error" and
/// whatever results were computed before the failure.
Json run_scenario(const Json& scenario, const RunOptions& options = {});

/// Evaluates the scenario's expectation block against a report and stores
/// the outcome under "expectations" and "status".
void grade_report(const Json& scenario, Json& report);

/// Names of the scenarios compiled into the library, sorted.
std::vector<std::string> builtin_scenarios();
/// Throws std::out_of_range for an unknown name.
Json builtin_scenario(const std::string& name);
/// Reads a scenario from a path, or from the built-ins when no such file
/// exists. Parse errors become SchemaError.
Json load_scenario(const std::string& path_or_name);

std::string scenario_schema_text();
std::string toolkit_version();

/// Flattens numeric and boolean leaves of a report's results into
/// (pointer, value) rows, skipping matrix literals.
std::vector<std::pair<std::string, std::string>> flatten_results(const Json& report);

}  // namespace rescomp
