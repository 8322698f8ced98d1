#include "spikelab/json_io.hpp"

#include <cmath>

#include "spikelab/error.hpp"

namespace spikelab {

namespace {

// JSON has no infinities; they are written as strings.
Json number(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double read_number(const Json& j, const std::string& what) {
  if (!j.is_number()) {
    throw InvalidInput(what + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw InvalidInput(what + " must be finite");
  }
  return v;
}

Point read_point(const Json& j, const MetricSpace& metric, const std::string& what) {
  Point p;
  if (j.is_number()) {
    p = Point({read_number(j, what)});
  } else if (j.is_array()) {
    for (const auto& c : j) {
      p.coords.push_back(read_number(c, what));
    }
  } else {
    throw InvalidInput(what + " must be a number or an array of numbers");
  }
  metric.validate(p);
  return p;
}

std::vector<Point> read_points(const Json& j, const MetricSpace& metric, const std::string& what) {
  if (!j.is_array()) {
    throw InvalidInput(what + " must be an array");
  }
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(read_point(j[i], metric, what + "[" + std::to_string(i) + "]"));
  }
  return out;
}

} // namespace

MetricKind parse_metric_kind(const std::string& s) {
  if (s == "line") {
    return MetricKind::line;
  }
  if (s == "euclidean") {
    return MetricKind::euclidean;
  }
  if (s == "explicit") {
    return MetricKind::explicit_matrix;
  }
  throw InvalidInput("unknown metric kind '" + s + "'");
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) {
    throw InvalidInput("instance must be a JSON object");
  }
  for (const char* key : {"metric", "candidates", "agents"}) {
    if (!j.contains(key)) {
      throw InvalidInput(std::string("instance is missing '") + key + "'");
    }
  }
  const Json& mj = j["metric"];
  if (!mj.is_object() || !mj.contains("kind") || !mj["kind"].is_string()) {
    throw InvalidInput("metric must be an object with a string 'kind'");
  }
  const MetricKind kind = parse_metric_kind(mj["kind"].get<std::string>());
  MetricSpace metric = MetricSpace::line();
  if (kind == MetricKind::euclidean) {
    if (!mj.contains("dim") || !mj["dim"].is_number_integer() || mj["dim"].get<long long>() < 1) {
      throw InvalidInput("euclidean metric needs an integer 'dim' >= 1");
    }
    metric = MetricSpace::euclidean(mj["dim"].get<std::size_t>());
  } else if (kind == MetricKind::explicit_matrix) {
    if (!mj.contains("matrix") || !mj["matrix"].is_array()) {
      throw InvalidInput("explicit metric needs a 'matrix'");
    }
    std::vector<std::vector<double>> rows;
    for (const auto& row : mj["matrix"]) {
      if (!row.is_array()) {
        throw InvalidInput("matrix rows must be arrays");
      }
      std::vector<double> r;
      for (const auto& v : row) {
        r.push_back(read_number(v, "matrix entry"));
      }
      rows.push_back(std::move(r));
    }
    metric = MetricSpace::explicit_matrix(std::move(rows));
  }
  auto candidates = read_points(j["candidates"], metric, "candidates");
  auto agents = read_points(j["agents"], metric, "agents");
  return Instance(Election(std::move(metric), std::move(candidates)), std::move(agents));
}

Json to_json(const MetricSpace& metric) {
  Json j;
  j["kind"] = to_string(metric.kind());
  if (metric.kind() == MetricKind::euclidean) {
    j["dim"] = metric.dim();
  }
  if (metric.kind() == MetricKind::explicit_matrix) {
    j["matrix"] = metric.matrix();
  }
  return j;
}

Json to_json(const Point& p) {
  Json j = Json::array();
  for (double c : p.coords) {
    j.push_back(c);
  }
  return j;
}

Json to_json(const Instance& inst) {
  Json j;
  j["metric"] = to_json(inst.metric());
  j["candidates"] = Json::array();
  for (const auto& y : inst.election().candidates()) {
    j["candidates"].push_back(to_json(y));
  }
  j["agents"] = Json::array();
  for (const auto& x : inst.agents()) {
    j["agents"].push_back(to_json(x));
  }
  return j;
}

Json to_json(const Lottery& lot) { return lot.probs; }

Json to_json(const Action& a) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Point>) {
          return to_json(v);
        } else {
          return Json(v);
        }
      },
      a);
}

Json to_json(const ActionProfile& a) {
  Json j;
  j["kind"] = to_string(kind_of(a));
  j["actions"] = Json::array();
  for (std::size_t i = 0; i < profile_size(a); ++i) {
    j["actions"].push_back(to_json(action_at(a, i)));
  }
  return j;
}

ActionProfile profile_from_json(const Json& j, InputKind kind) {
  const Json& arr = j.is_object() && j.contains("actions") ? j["actions"] : j;
  if (!arr.is_array()) {
    throw InvalidInput("action profile must be an array");
  }
  try {
    switch (kind) {
    case InputKind::voting:
      return arr.get<Votes>();
    case InputKind::ranking:
      return arr.get<Rankings>();
    case InputKind::location: {
      Locations locs;
      for (const auto& p : arr) {
        locs.push_back(p.is_number() ? Point({p.get<double>()}) : Point(p.get<std::vector<double>>()));
      }
      return locs;
    }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad action profile: ") + e.what());
  }
  throw InvalidInput("unknown input kind");
}

Json to_json(const RatioReport& r) {
  Json j;
  j["worst_truthful_cost"] = number(r.worst_truthful_cost);
  j["optimal_cost"] = number(r.optimal_cost);
  j["optimal_candidate"] = r.optimal_candidate;
  j["ratio"] = number(r.ratio);
  j["infinite"] = r.infinite;
  j["witness"] = to_json(r.witness);
  j["lottery"] = to_json(r.lottery);
  return j;
}

Json to_json(const Violation& v) {
  Json j;
  j["instance"] = to_json(v.instance);
  j["agents"] = v.agents;
  j["truthful"] = to_json(v.truthful);
  j["deviated"] = to_json(v.deviated);
  j["cost_before"] = v.cost_before;
  j["cost_after"] = v.cost_after;
  return j;
}

Json to_json(const AuditReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["instances"] = r.instances;
  j["comparisons"] = r.comparisons;
  j["violation_count"] = r.violation_count;
  j["search_space"] = r.search_space;
  j["violations"] = Json::array();
  for (const auto& v : r.violations) {
    j["violations"].push_back(to_json(v));
  }
  return j;
}

Json to_json(const GroupedProfile& g) {
  Json j = Json::array();
  for (const auto& grp : g.groups) {
    j.push_back({{"x", grp.x}, {"count", grp.count}});
  }
  return j;
}

Json to_json(const ThreeCandidateReduction& r) {
  return {{"L", r.L}, {"C", r.C}, {"R", r.R}, {"beta", r.beta}};
}

Json to_json(const CompressionResult& r) {
  Json j;
  j["opt"] = r.opt;
  j["trace"] = Json::array();
  for (const auto& g : r.trace) {
    j["trace"].push_back(to_json(g));
  }
  j["reduction"] = to_json(r.reduction);
  j["final_instance"] = to_json(r.final_instance);
  return j;
}

Json to_json(const ReductionReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["instances"] = r.instances;
  j["profiles"] = r.profiles;
  j["mismatches"] = r.mismatches;
  j["inconsistent"] = r.inconsistent;
  j["max_difference"] = r.max_difference;
  j["first_failure"] = r.first_failure;
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["kind"] = r.kind;
  j["mechanism"] = r.mechanism;
  j["claimed_bound"] = number(r.claimed_bound);
  j["achieved"] = number(r.achieved);
  j["witness_ratio"] = number(r.witness_ratio);
  j["witness"] = r.witness ? to_json(*r.witness) : Json();
  j["witness_profile"] = r.witness_profile ? to_json(*r.witness_profile) : Json();
  j["chain"] = Json::array();
  for (const auto& a : r.chain) {
    j["chain"].push_back(to_json(a));
  }
  j["chain_probability"] = r.chain_probability;
  j["key_candidate"] = r.key_candidate;
  j["samples"] = r.samples;
  j["probes"] = r.probes;
  j["skipped"] = r.skipped;
  return j;
}

} // namespace spikelab
