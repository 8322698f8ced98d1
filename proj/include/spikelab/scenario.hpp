#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/json_io.hpp"

namespace spikelab {

enum class Task { eval, audit, reduce, lowerbound, search, compress };
std::string to_string(Task t);
Task parse_task(const std::string& s);

/// Exit statuses of a scenario run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitViolation = 2;

/// A generator name with its parameters, e.g. {"name": "gap", "eps": 0.001}.
struct Generator {
  std::string name;
  Json params;
};

struct Scenario {
  std::string name;
  Task task = Task::eval;
  std::vector<std::string> mechanisms;
  std::optional<Json> instance;     // inline instance JSON
  std::optional<Generator> generator;
  std::optional<double> bound;
  std::uint64_t seed = 0;
  Json params = Json::object();     // task parameters
  std::optional<std::string> output; // directory for report files
};

/// Throws InvalidInput on schema violations or unknown mechanisms.
Scenario scenario_from_json(const Json& j);
Scenario load_scenario(const std::filesystem::path& file);

/// Instances named by the scenario: the inline one, or the generator's.
std::vector<std::pair<std::string, Instance>> scenario_instances(const Scenario& s);

/// scenario,mechanism,metric,n,m,worst_cost,opt_cost,ratio,bound,pass
std::string summary_csv_header();

struct ScenarioResult {
  int exit_code = kExitOk;
  Json report;
  std::vector<std::string> csv_rows;       // without header
  std::vector<std::string> violation_rows; // audit violations, without header
};

/// scenario,mechanism,agents,cost_before,cost_after (agents 1-based, ';'-joined)
std::string violation_csv_header();

/// Runs the scenario. Input errors are thrown, not folded into the result.
ScenarioResult run_scenario(const Scenario& s);

/// Writes <dir>/<name>.json and <dir>/<name>.csv, plus
/// <dir>/<name>.violations.csv when the audit found violations.
void write_reports(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir);

} // namespace spikelab
