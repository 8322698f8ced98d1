// spikelab: command-line front end.
//
//   spikelab eval --mech spike --generator gap --param eps=0.001
//   spikelab audit --scenario scenarios/rd-gsp.json
//   spikelab repro-all --seed 0
//
// Exit status: 0 ok, 1 input error, 2 audit violation or failed bound.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spikelab/error.hpp"
#include "spikelab/format.hpp"
#include "spikelab/mechanisms.hpp"
#include "spikelab/repro.hpp"
#include "spikelab/scenario.hpp"

namespace {

using namespace spikelab;

struct Common {
  std::string scenario_file;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> grid_step;
  std::optional<std::size_t> samples;
  std::vector<std::string> mechs;
  std::string instance_file;
  std::string generator;
  std::vector<std::string> gen_params;
  std::optional<double> bound;
  std::vector<std::string> task_params;
};

struct TaskFlags {
  std::string from_kind, to_kind;
  std::optional<std::size_t> check_samples;
  std::string construction;
  std::optional<std::size_t> dim;
  std::string metric;
  std::string audit_type;
  std::optional<std::size_t> workers;
  bool gap_probes = false;
};

Json parse_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text; // bare strings
  }
}

void apply_pairs(Json& into, const std::vector<std::string>& pairs) {
  for (const auto& kv : pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidInput("expected key=value, got '" + kv + "'");
    }
    into[kv.substr(0, eq)] = parse_value(kv.substr(eq + 1));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInput("cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + " is not valid JSON: " + e.what());
  }
}

Scenario build_scenario(Task task, const Common& c, const TaskFlags& t) {
  Scenario s;
  if (!c.scenario_file.empty()) {
    s = load_scenario(c.scenario_file);
    if (s.task != task) {
      throw InvalidInput("scenario task is '" + to_string(s.task) + "', not '" + to_string(task) + "'");
    }
  } else {
    Json j;
    j["name"] = to_string(task);
    j["task"] = to_string(task);
    j["mechanisms"] = c.mechs;
    if (!c.instance_file.empty()) {
      j["instance"] = read_json_file(c.instance_file);
    }
    if (!c.generator.empty()) {
      Json g;
      g["name"] = c.generator;
      apply_pairs(g, c.gen_params);
      j["generator"] = g;
    }
    if (c.bound) {
      j["bound"] = *c.bound;
    }
    s = scenario_from_json(j);
  }
  if (!c.scenario_file.empty() && !c.mechs.empty()) {
    s.mechanisms = c.mechs;
    for (const auto& m : s.mechanisms) {
      make_mechanism(m);
    }
  }
  if (c.seed) {
    s.seed = *c.seed;
  }
  if (c.bound) {
    s.bound = c.bound;
  }
  if (c.grid_step) {
    s.params["grid_step"] = *c.grid_step;
  }
  if (c.samples) {
    s.params[task == Task::reduce ? "check_samples" : "count"] = *c.samples;
  }
  if (!t.from_kind.empty()) {
    s.params["from_kind"] = t.from_kind;
  }
  if (!t.to_kind.empty()) {
    s.params["to_kind"] = t.to_kind;
  }
  if (t.check_samples) {
    s.params["check_samples"] = *t.check_samples;
  }
  if (!t.construction.empty()) {
    Generator g{t.construction, Json::object()};
    if (t.dim) {
      g.params["d"] = *t.dim;
    }
    s.generator = std::move(g);
  }
  if (!t.metric.empty()) {
    s.params["metric"] = t.metric;
  }
  if (t.dim && task == Task::search) {
    s.params["dim"] = *t.dim;
  }
  if (!t.audit_type.empty()) {
    s.params["type"] = t.audit_type;
  }
  if (t.workers) {
    s.params["workers"] = *t.workers;
  }
  if (t.gap_probes) {
    s.params["gap_probes"] = true;
  }
  apply_pairs(s.params, c.task_params);
  if (!c.out.empty()) {
    s.output = c.out;
  }
  return s;
}

int run_task(Task task, const Common& c, const TaskFlags& t) {
  const Scenario s = build_scenario(task, c, t);
  const ScenarioResult r = run_scenario(s);
  std::cout << summary_csv_header() << '\n';
  for (const auto& row : r.csv_rows) {
    std::cout << row << '\n';
  }
  if (!r.violation_rows.empty()) {
    std::cout << '\n' << violation_csv_header() << '\n';
    for (const auto& row : r.violation_rows) {
      std::cout << row << '\n';
    }
  }
  if (s.output) {
    write_reports(s, r, *s.output);
  }
  return r.exit_code;
}

int run_repro(const Common& c, std::size_t workers) {
  ReproOptions opts;
  opts.seed = c.seed.value_or(0);
  opts.samples = c.samples;
  opts.workers = workers;
  if (c.grid_step) {
    opts.grid_step = *c.grid_step;
  }
  const auto rows = repro_all(opts);
  for (const auto& row : rows) {
    std::cout << format_row(row) << '\n';
  }
  if (!c.out.empty()) {
    std::filesystem::create_directories(c.out);
    std::ofstream csv(std::filesystem::path(c.out) / "claims.csv");
    csv << claims_csv_header() << '\n';
    for (const auto& row : rows) {
      csv << claims_csv_row(row) << '\n';
    }
  }
  return all_passed(rows) ? kExitOk : kExitViolation;
}

void add_common(CLI::App* sub, Common& c, bool instances) {
  sub->add_option("--scenario", c.scenario_file, "Scenario JSON file");
  sub->add_option("--seed", c.seed, "64-bit seed (default 0)");
  sub->add_option("--out", c.out, "Directory for JSON and CSV reports");
  sub->add_option("--grid-step", c.grid_step, "Deviation grid step");
  sub->add_option("--samples", c.samples, "Number of sampled instances");
  sub->add_option("--mech", c.mechs, "Mechanism name, repeatable (" + [] {
    std::string names;
    for (const auto& n : registry_names()) {
      names += (names.empty() ? "" : ", ") + n;
    }
    return names;
  }() + ")");
  sub->add_option("--bound", c.bound, "Bound that every row must respect");
  sub->add_option("--set", c.task_params, "Task parameter key=value, repeatable");
  if (instances) {
    sub->add_option("--instance", c.instance_file, "Instance JSON file");
    sub->add_option("--generator", c.generator, "Instance generator: gap, rd-worst, gsp, three-candidate, grid-line");
    sub->add_option("--param", c.gen_params, "Generator parameter key=value, repeatable");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mechanism lab for candidate-constrained facility location and voting"};
  app.require_subcommand(1);
  Common c;
  TaskFlags t;
  std::size_t repro_workers = 1;

  std::map<std::string, Task> tasks{{"eval", Task::eval},     {"audit", Task::audit},
                                    {"reduce", Task::reduce}, {"lowerbound", Task::lowerbound},
                                    {"search", Task::search}, {"compress", Task::compress}};
  std::map<std::string, CLI::App*> subs;
  subs["eval"] = app.add_subcommand("eval", "Worst truthful approximation ratio of each mechanism");
  subs["audit"] = app.add_subcommand("audit", "Truthfulness audit; exit 2 on a violation");
  subs["reduce"] = app.add_subcommand("reduce", "Check a reduction between input kinds");
  subs["lowerbound"] = app.add_subcommand("lowerbound", "Run a lower-bound proof procedure against a mechanism");
  subs["search"] = app.add_subcommand("search", "Seeded random search for the worst ratio");
  subs["compress"] = app.add_subcommand("compress", "Tighten and compress a line instance, with the trace");
  for (const auto& [name, sub] : subs) {
    add_common(sub, c, name == "eval" || name == "audit" || name == "compress");
  }
  subs["audit"]->add_option("--type", t.audit_type, "unilateral (default), gsp or universal-wpv");
  subs["audit"]->add_option("--workers", t.workers, "Worker threads");
  subs["reduce"]->add_option("--from-kind", t.from_kind, "Input kind of the mechanism");
  subs["reduce"]->add_option("--to-kind", t.to_kind, "Target input kind");
  subs["reduce"]->add_option("--check-samples", t.check_samples, "Instances checked");
  subs["lowerbound"]->add_option("--construction", t.construction, "simplex or triangle");
  subs["lowerbound"]->add_option("--dim", t.dim, "Simplex dimension");
  subs["search"]->add_option("--metric", t.metric, "line, euclidean or explicit");
  subs["search"]->add_option("--dim", t.dim, "Euclidean dimension");
  subs["search"]->add_option("--workers", t.workers, "Worker threads");
  subs["search"]->add_flag("--gap-probes", t.gap_probes, "Also probe the gap pair");

  auto* repro = app.add_subcommand("repro-all", "Run every claim check and print the table");
  repro->add_option("--seed", c.seed, "64-bit seed (default 0)");
  repro->add_option("--samples", c.samples, "Override every sampled count (0 skips search rows)");
  repro->add_option("--grid-step", c.grid_step, "p grid of the non-strategic bound");
  repro->add_option("--workers", repro_workers, "Worker threads");
  repro->add_option("--out", c.out, "Directory for claims.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (repro->parsed()) {
      return run_repro(c, repro_workers);
    }
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) {
        return run_task(tasks.at(name), c, t);
      }
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SpaceOverflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const PreconditionFailed& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
