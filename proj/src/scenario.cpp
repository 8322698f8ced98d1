#include "spikelab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spikelab/error.hpp"
#include "spikelab/format.hpp"
#include "spikelab/mechanisms.hpp"

namespace spikelab {

std::string to_string(Task t) {
  switch (t) {
  case Task::eval:
    return "eval";
  case Task::audit:
    return "audit";
  case Task::reduce:
    return "reduce";
  case Task::lowerbound:
    return "lowerbound";
  case Task::search:
    return "search";
  case Task::compress:
    return "compress";
  }
  return "unknown";
}

Task parse_task(const std::string& s) {
  for (Task t : {Task::eval, Task::audit, Task::reduce, Task::lowerbound, Task::search, Task::compress}) {
    if (to_string(t) == s) {
      return t;
    }
  }
  throw InvalidInput("unknown task '" + s + "'");
}

namespace {

constexpr double kTol = 1e-9;

template <class T>
T param(const Json& params, const char* key, T fallback) {
  if (!params.contains(key)) {
    return fallback;
  }
  try {
    return params[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(std::string("parameter '") + key + "' has the wrong type");
  }
}

std::size_t count_param(const Json& params, const char* key, std::size_t fallback) {
  if (!params.contains(key)) {
    return fallback;
  }
  if (!params[key].is_number_integer() || params[key].get<long long>() < 0) {
    throw InvalidInput(std::string("parameter '") + key + "' must be a nonnegative integer");
  }
  return params[key].get<std::size_t>();
}

double positive(const Json& params, const char* key, double fallback) {
  const double v = param<double>(params, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string("parameter '") + key + "' must be positive");
  }
  return v;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

struct Row {
  std::string label;
  std::string mechanism;
  std::string metric;
  std::string n, m;
  std::string worst, opt, ratio;
  std::optional<double> bound;
  bool pass = true;

  std::string csv() const {
    return csv_field(label) + "," + csv_field(mechanism) + "," + metric + "," + n + "," + m + "," + worst + "," +
           opt + "," + ratio + "," + opt_number(bound) + "," + (pass ? "true" : "false");
  }
};

Row instance_row(const std::string& label, const std::string& mech, const Instance& inst) {
  Row r;
  r.label = label;
  r.mechanism = mech;
  r.metric = to_string(inst.metric().kind());
  r.n = std::to_string(inst.n());
  r.m = std::to_string(inst.m());
  return r;
}

void fill_ratio(Row& row, const RatioReport& rep) {
  row.worst = format_number(rep.worst_truthful_cost);
  row.opt = format_number(rep.optimal_cost);
  row.ratio = format_number(rep.ratio);
}

std::string label_for(const Scenario& s, const std::string& part, std::size_t total) {
  return total > 1 ? s.name + ":" + part : s.name;
}

SearchConfig search_config(const Scenario& s) {
  const Json& p = s.params;
  SearchConfig cfg;
  cfg.n_min = count_param(p, "n_min", cfg.n_min);
  cfg.n_max = count_param(p, "n_max", cfg.n_max);
  cfg.m_min = count_param(p, "m_min", cfg.m_min);
  cfg.m_max = count_param(p, "m_max", cfg.m_max);
  cfg.coord_lo = param<double>(p, "coord_lo", cfg.coord_lo);
  cfg.coord_hi = param<double>(p, "coord_hi", cfg.coord_hi);
  cfg.count = count_param(p, "count", cfg.count);
  cfg.metric = parse_metric_kind(param<std::string>(p, "metric", "line"));
  cfg.dim = count_param(p, "dim", cfg.dim);
  cfg.max_points = count_param(p, "max_points", cfg.max_points);
  cfg.compression_probes = param<bool>(p, "compression_probes", cfg.compression_probes);
  cfg.gap_probes = param<bool>(p, "gap_probes", cfg.gap_probes);
  cfg.workers = std::max<std::size_t>(1, count_param(p, "workers", 1));
  cfg.seed = s.seed;
  cfg.validate();
  return cfg;
}

DeviationSpace deviation_space(const Json& p) {
  DeviationSpace space;
  space.grid_step = positive(p, "grid_step", space.grid_step);
  space.box_margin = param<double>(p, "box_margin", space.box_margin);
  if (p.contains("box")) {
    const auto box = param<std::vector<double>>(p, "box", {});
    if (box.size() != 2 || !(box[0] < box[1])) {
      throw InvalidInput("parameter 'box' must be [lo, hi] with lo < hi");
    }
    space.box_lo = box[0];
    space.box_hi = box[1];
  }
  return space;
}

ConsistentMap coarsening_map(InputKind from, InputKind to) {
  if (from == InputKind::ranking && to == InputKind::voting) {
    return top_of_ranking();
  }
  if (from == InputKind::location && to == InputKind::voting) {
    return favorite_of_location();
  }
  if (from == InputKind::location && to == InputKind::ranking) {
    return ranking_of_location();
  }
  throw InvalidInput("no consistent map from " + to_string(from) + " to " + to_string(to));
}

ScenarioResult run_eval(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  const auto instances = scenario_instances(s);
  out.report["results"] = Json::array();
  for (const auto& [part, inst] : instances) {
    for (const auto& mech : mechs) {
      const RatioReport rep = approximation_ratio(mech, inst);
      Row row = instance_row(label_for(s, part, instances.size()), mech.name(), inst);
      fill_ratio(row, rep);
      row.bound = s.bound;
      row.pass = !s.bound || (!rep.infinite && rep.ratio <= *s.bound + kTol);
      out.csv_rows.push_back(row.csv());
      out.report["results"].push_back(
          {{"instance_label", part}, {"mechanism", mech.name()}, {"instance", to_json(inst)}, {"ratio", to_json(rep)}, {"pass", row.pass}});
      if (!row.pass) {
        out.exit_code = kExitViolation;
      }
    }
  }
  return out;
}

ScenarioResult run_audit(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  const std::string type = param<std::string>(s.params, "type", "unilateral");
  const std::size_t workers = std::max<std::size_t>(1, count_param(s.params, "workers", 1));
  out.report["type"] = type;
  out.report["results"] = Json::array();
  std::vector<std::pair<std::string, InstanceFamily>> families;
  std::vector<std::optional<Instance>> singles;
  if (s.generator && s.generator->name == "grid-line") {
    const Json& g = s.generator->params;
    const auto grid = param<std::vector<double>>(g, "grid", {});
    if (grid.empty()) {
      throw InvalidInput("grid-line generator needs a nonempty 'grid'");
    }
    families.emplace_back("grid", grid_line_family(grid, count_param(g, "n", 1), count_param(g, "max_m", 3)));
    singles.emplace_back();
  } else {
    const auto instances = scenario_instances(s);
    for (const auto& [part, inst] : instances) {
      families.emplace_back(label_for(s, part, instances.size()), single_instance_family(inst));
      singles.emplace_back(inst);
    }
  }
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& [label, family] = families[f];
    for (const auto& mech : mechs) {
      AuditReport rep;
      if (type == "unilateral") {
        rep = audit_unilateral(mech, family, deviation_space(s.params), workers);
      } else if (type == "gsp") {
        for (std::size_t i = 0; i < family.size; ++i) {
          const Instance inst = family.at(i);
          const std::size_t max_coalition = count_param(s.params, "max_coalition", inst.n());
          rep.merge(audit_gsp(mech, inst, max_coalition));
        }
      } else if (type == "universal-wpv") {
        const std::string prefix = "wpv:";
        if (mech.name() != "spike" && mech.name() != "median" && mech.name() != "random-dictator" &&
            mech.name().rfind(prefix, 0) != 0) {
          throw InvalidInput("universal-wpv audit needs a WPV mechanism, got " + mech.name());
        }
        for (std::size_t i = 0; i < family.size; ++i) {
          const Instance inst = family.at(i);
          const std::size_t n = inst.n();
          WpvWeights w = mech.name() == "spike"    ? WpvWeights::spike(n)
                         : mech.name() == "median" ? WpvWeights::point_mass(n, (n + 1) / 2)
                         : mech.name() == "random-dictator"
                             ? WpvWeights::uniform(n)
                             : WpvWeights(param<std::vector<double>>(s.params, "weights", {}));
          if (w.n() != n) {
            throw InvalidInput("WPV weights do not match the number of agents");
          }
          rep.merge(audit_universal_wpv(w, single_instance_family(inst), workers));
        }
      } else {
        throw InvalidInput("unknown audit type '" + type + "'");
      }
      Row row;
      row.label = label;
      row.mechanism = mech.name();
      row.pass = rep.passed;
      if (singles[f]) {
        const Instance& inst = *singles[f];
        row = instance_row(label, mech.name(), inst);
        row.pass = rep.passed;
        try {
          fill_ratio(row, approximation_ratio(mech, inst));
        } catch (const SpaceOverflow&) {
        }
      } else {
        row.metric = "line";
      }
      out.csv_rows.push_back(row.csv());
      for (const auto& v : rep.violations) {
        auto join = [](const std::vector<double>& xs) {
          std::string o;
          for (double x : xs) {
            o += (o.empty() ? "" : ";") + format_number(x);
          }
          return o;
        };
        std::string agents;
        for (std::size_t a : v.agents) {
          agents += (agents.empty() ? "" : ";") + std::to_string(a + 1);
        }
        out.violation_rows.push_back(csv_field(label) + "," + csv_field(mech.name()) + "," + agents + "," +
                                     join(v.cost_before) + "," + join(v.cost_after));
      }
      out.report["results"].push_back({{"label", label}, {"mechanism", mech.name()}, {"audit", to_json(rep)}});
      if (!rep.passed) {
        out.exit_code = kExitViolation;
      }
    }
  }
  return out;
}

ScenarioResult run_reduce(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  const std::size_t samples = count_param(s.params, "check_samples", 1000);
  out.report["results"] = Json::array();
  for (const auto& mech : mechs) {
    const InputKind from = parse_input_kind(param<std::string>(s.params, "from_kind", to_string(mech.input_kind())));
    const InputKind to = parse_input_kind(param<std::string>(s.params, "to_kind", "location"));
    if (from != mech.input_kind()) {
      throw InvalidInput(mech.name() + " takes " + to_string(mech.input_kind()) + " input, not " + to_string(from));
    }
    ReductionReport rep;
    std::string how;
    if (finer(to, from)) {
      const Mechanism lifted = lift(mech, to);
      rep = check_reduction(lifted, mech, coarsening_map(to, from), lattice_line_family(s.seed, samples, 6, 1, 4));
      how = "lift";
    } else if (from == InputKind::location && to == InputKind::ranking) {
      rep = check_reduction(mech, project_location_to_ranking(mech), tie_breaking_ranking_map(mech),
                            lattice_line_family(s.seed, samples, 6, 1, 4));
      how = "tie-breaking projection";
    } else if (from == InputKind::location && to == InputKind::voting) {
      rep = check_reduction(mech, project_location_to_voting_2cand(mech), two_candidate_mixing_map(mech),
                            lattice_line_family(s.seed, samples, 6, 2, 2));
      how = "two-candidate mixing";
    } else {
      throw InvalidInput("cannot reduce " + to_string(from) + " to " + to_string(to));
    }
    Row row;
    row.label = s.name;
    row.mechanism = mech.name();
    row.metric = "line";
    row.pass = rep.passed;
    out.csv_rows.push_back(row.csv());
    out.report["results"].push_back({{"mechanism", mech.name()},
                                     {"from_kind", to_string(from)},
                                     {"to_kind", to_string(to)},
                                     {"construction", how},
                                     {"check_samples", samples},
                                     {"report", to_json(rep)}});
    if (!rep.passed) {
      out.exit_code = kExitViolation;
    }
  }
  return out;
}

ScenarioResult run_lowerbound(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  if (!s.generator) {
    throw InvalidInput("lowerbound needs a 'simplex' or 'triangle' generator");
  }
  out.report["results"] = Json::array();
  for (const auto& mech : mechs) {
    BoundReport rep;
    if (s.generator->name == "simplex") {
      const std::size_t d = count_param(s.generator->params, "d", 2);
      if (d < 1) {
        throw InvalidInput("simplex needs d >= 1");
      }
      rep = simplex_audit(mech, d);
    } else if (s.generator->name == "triangle") {
      rep = triangle_audit(mech);
    } else {
      throw InvalidInput("lowerbound needs a 'simplex' or 'triangle' generator");
    }
    Row row = instance_row(s.name, mech.name(), *rep.witness);
    fill_ratio(row, ratio_for_profile(mech, *rep.witness, *rep.witness_profile));
    row.bound = s.bound.value_or(rep.claimed_bound);
    row.pass = rep.achieved >= *row.bound - kTol;
    out.csv_rows.push_back(row.csv());
    out.report["results"].push_back(to_json(rep));
    if (!row.pass) {
      out.exit_code = kExitViolation;
    }
  }
  return out;
}

ScenarioResult run_search(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  const SearchConfig cfg = search_config(s);
  out.report["results"] = Json::array();
  for (const auto& mech : mechs) {
    const BoundReport rep = ratio_search(mech, cfg);
    Row row;
    row.label = s.name;
    row.mechanism = mech.name();
    row.metric = to_string(cfg.metric);
    if (rep.witness) {
      row = instance_row(s.name, mech.name(), *rep.witness);
      fill_ratio(row, ratio_for_profile(mech, *rep.witness, *rep.witness_profile));
    }
    row.bound = s.bound;
    row.pass = !s.bound || rep.achieved <= *s.bound + kTol;
    out.csv_rows.push_back(row.csv());
    out.report["results"].push_back(to_json(rep));
    if (!row.pass) {
      out.exit_code = kExitViolation;
    }
  }
  return out;
}

ScenarioResult run_compress(const Scenario& s, const std::vector<Mechanism>& mechs) {
  ScenarioResult out;
  out.report["results"] = Json::array();
  const auto instances = scenario_instances(s);
  for (const auto& [part, inst] : instances) {
    const CompressionResult cr = compress_fully(inst);
    Json j = to_json(cr);
    j["instance_label"] = part;
    j["three_candidate_spike"] = three_candidate_spike_ratio(cr.reduction);
    for (const auto& mech : mechs) {
      if (mech.input_kind() != InputKind::voting) {
        throw InvalidInput("compress reports need a voting mechanism");
      }
      for (std::size_t k = 0; k < cr.trace.size(); ++k) {
        const Instance step = cr.trace[k].to_instance(inst.election());
        Row row = instance_row(label_for(s, part, instances.size()) + "#" + std::to_string(k), mech.name(), step);
        fill_ratio(row, ratio_for_profile(mech, step, outward_votes(step, cr.opt)));
        row.bound = s.bound;
        out.csv_rows.push_back(row.csv());
      }
    }
    out.report["results"].push_back(std::move(j));
  }
  return out;
}

} // namespace

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) {
    throw InvalidInput("scenario must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    static const std::vector<std::string> known{"name",  "task", "mechanism", "mechanisms", "instance", "generator",
                                                "bound", "seed", "params",    "output"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidInput("unknown scenario field '" + key + "'");
    }
  }
  Scenario s;
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    throw InvalidInput("scenario needs a nonempty string 'name'");
  }
  s.name = j["name"].get<std::string>();
  if (!j.contains("task") || !j["task"].is_string()) {
    throw InvalidInput("scenario needs a string 'task'");
  }
  s.task = parse_task(j["task"].get<std::string>());
  if (j.contains("mechanism")) {
    if (!j["mechanism"].is_string()) {
      throw InvalidInput("'mechanism' must be a string");
    }
    s.mechanisms.push_back(j["mechanism"].get<std::string>());
  }
  if (j.contains("mechanisms")) {
    if (!j["mechanisms"].is_array()) {
      throw InvalidInput("'mechanisms' must be an array of strings");
    }
    for (const auto& m : j["mechanisms"]) {
      if (!m.is_string()) {
        throw InvalidInput("'mechanisms' must be an array of strings");
      }
      s.mechanisms.push_back(m.get<std::string>());
    }
  }
  if (s.mechanisms.empty() && s.task != Task::compress) {
    throw InvalidInput("scenario names no mechanism");
  }
  for (const auto& m : s.mechanisms) {
    make_mechanism(m); // rejects unknown names
  }
  if (j.contains("instance")) {
    s.instance = j["instance"];
    instance_from_json(*s.instance);
  }
  if (j.contains("generator")) {
    const Json& g = j["generator"];
    if (!g.is_object() || !g.contains("name") || !g["name"].is_string()) {
      throw InvalidInput("'generator' must be an object with a string 'name'");
    }
    Generator gen{g["name"].get<std::string>(), Json::object()};
    for (const auto& [key, value] : g.items()) {
      if (key != "name") {
        gen.params[key] = value;
      }
    }
    s.generator = std::move(gen);
  }
  if (s.instance && s.generator) {
    throw InvalidInput("scenario gives both 'instance' and 'generator'");
  }
  if (j.contains("bound")) {
    if (!j["bound"].is_number()) {
      throw InvalidInput("'bound' must be a number");
    }
    s.bound = j["bound"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw InvalidInput("'seed' must be a nonnegative integer");
    }
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) {
      throw InvalidInput("'params' must be an object");
    }
    s.params = j["params"];
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) {
      throw InvalidInput("'output' must be a string");
    }
    s.output = j["output"].get<std::string>();
  }
  if (s.generator) {
    static const std::vector<std::string> known{"gap",      "rd-worst",        "gsp",      "three-candidate",
                                                "simplex",  "triangle",        "grid-line"};
    if (std::find(known.begin(), known.end(), s.generator->name) == known.end()) {
      throw InvalidInput("unknown generator '" + s.generator->name + "'");
    }
    if (s.generator->name != "simplex" && s.generator->name != "triangle" && s.generator->name != "grid-line") {
      scenario_instances(s); // validates generator parameters
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw InvalidInput("cannot open scenario file " + file.string());
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("scenario file " + file.string() + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

std::vector<std::pair<std::string, Instance>> scenario_instances(const Scenario& s) {
  if (s.instance) {
    return {{"instance", instance_from_json(*s.instance)}};
  }
  if (!s.generator) {
    throw InvalidInput("scenario needs an 'instance' or a 'generator'");
  }
  const auto& name = s.generator->name;
  const Json& p = s.generator->params;
  if (name == "gap") {
    auto pair = gap_instance(param<double>(p, "eps", 1e-3));
    return {{"x", std::move(pair.x)}, {"x_prime", std::move(pair.x_prime)}};
  }
  if (name == "rd-worst") {
    return {{"instance", rd_worst_instance(count_param(p, "n", 100), param<double>(p, "eps", 1e-3))}};
  }
  if (name == "gsp") {
    return {{"instance", Instance::on_line({-1.0, 0.0, 1.0}, {-0.51, 0.51})}};
  }
  if (name == "three-candidate") {
    ThreeCandidateReduction r{count_param(p, "L", 1), count_param(p, "C", 1), count_param(p, "R", 1),
                              positive(p, "beta", 1.0)};
    if (r.n() == 0) {
      throw InvalidInput("three-candidate generator needs at least one agent");
    }
    return {{"instance", realize_reduction(r)}};
  }
  throw InvalidInput("generator '" + name + "' does not produce instances for this task");
}

std::string summary_csv_header() { return "scenario,mechanism,metric,n,m,worst_cost,opt_cost,ratio,bound,pass"; }

std::string violation_csv_header() { return "scenario,mechanism,agents,cost_before,cost_after"; }

ScenarioResult run_scenario(const Scenario& s) {
  std::vector<Mechanism> mechs;
  for (const auto& m : s.mechanisms) {
    mechs.push_back(make_mechanism(m));
  }
  if (s.task == Task::compress && mechs.empty()) {
    mechs.push_back(spike());
  }
  ScenarioResult r;
  switch (s.task) {
  case Task::eval:
    r = run_eval(s, mechs);
    break;
  case Task::audit:
    r = run_audit(s, mechs);
    break;
  case Task::reduce:
    r = run_reduce(s, mechs);
    break;
  case Task::lowerbound:
    r = run_lowerbound(s, mechs);
    break;
  case Task::search:
    r = run_search(s, mechs);
    break;
  case Task::compress:
    r = run_compress(s, mechs);
    break;
  }
  Json report;
  report["scenario"] = s.name;
  report["task"] = to_string(s.task);
  report["seed"] = s.seed;
  report["params"] = s.params;
  report["exit_code"] = r.exit_code;
  for (auto& [key, value] : r.report.items()) {
    report[key] = value;
  }
  r.report = std::move(report);
  return r;
}

void write_reports(const Scenario& s, const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream json(dir / (s.name + ".json"));
    json << r.report.dump(2) << '\n';
  }
  std::ofstream csv(dir / (s.name + ".csv"));
  csv << summary_csv_header() << '\n';
  for (const auto& row : r.csv_rows) {
    csv << row << '\n';
  }
  if (!r.violation_rows.empty()) {
    std::ofstream v(dir / (s.name + ".violations.csv"));
    v << violation_csv_header() << '\n';
    for (const auto& row : r.violation_rows) {
      v << row << '\n';
    }
  }
  if (!csv) {
    throw InvalidInput("cannot write reports to " + dir.string());
  }
}

} // namespace spikelab
