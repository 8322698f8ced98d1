#include "spikelab/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "spikelab/error.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/mechanisms.hpp"

namespace spikelab {

namespace {

bool same_location(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max(1.0, std::abs(a) + std::abs(b));
}

std::optional<std::size_t> border_at(const std::vector<double>& borders, double x) {
  for (std::size_t k = 0; k < borders.size(); ++k) {
    if (same_location(borders[k], x)) {
      return k;
    }
  }
  return std::nullopt;
}

void require_opt(const Election& election, CandidateIndex opt) {
  if (!election.on_line_metric()) {
    throw InvalidInput("compression is defined on the line only");
  }
  if (opt >= election.m()) {
    throw InvalidInput("optimal candidate index out of range");
  }
}

GroupedProfile with_group_moved(const GroupedProfile& g, std::size_t from, double to) {
  std::vector<Group> out;
  out.reserve(g.groups.size());
  const std::size_t moved = g.groups[from].count;
  bool merged = false;
  for (std::size_t k = 0; k < g.groups.size(); ++k) {
    if (k == from) {
      continue;
    }
    Group grp = g.groups[k];
    if (same_location(grp.x, to)) {
      grp.count += moved;
      merged = true;
    }
    out.push_back(grp);
  }
  if (!merged) {
    out.push_back({to, moved});
    std::sort(out.begin(), out.end(), [](const Group& a, const Group& b) { return a.x < b.x; });
  }
  return GroupedProfile{std::move(out)};
}

} // namespace

GroupedProfile GroupedProfile::from_locations(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  GroupedProfile g;
  for (double x : xs) {
    if (!g.groups.empty() && g.groups.back().x == x) {
      g.groups.back().count += 1;
    } else {
      g.groups.push_back({x, 1});
    }
  }
  return g;
}

GroupedProfile GroupedProfile::from_instance(const Instance& inst) {
  if (!inst.election().on_line_metric()) {
    throw InvalidInput("grouped profiles live on the line");
  }
  std::vector<double> xs;
  xs.reserve(inst.n());
  for (const auto& a : inst.agents()) {
    xs.push_back(a.x());
  }
  return from_locations(std::move(xs));
}

std::size_t GroupedProfile::n() const {
  std::size_t total = 0;
  for (const auto& grp : groups) {
    total += grp.count;
  }
  return total;
}

std::vector<double> GroupedProfile::locations() const {
  std::vector<double> xs;
  for (const auto& grp : groups) {
    xs.insert(xs.end(), grp.count, grp.x);
  }
  return xs;
}

Instance GroupedProfile::to_instance(const Election& election) const {
  std::vector<Point> pts;
  for (double x : locations()) {
    pts.push_back(Point::on_line(x));
  }
  return Instance(election, std::move(pts));
}

void GroupedProfile::validate() const {
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].count == 0) {
      throw InvalidInput("group counts must be positive");
    }
    if (k > 0 && !(groups[k - 1].x < groups[k].x)) {
      throw InvalidInput("group locations must be strictly increasing");
    }
  }
}

Instance tight_profile(const Instance& inst, CandidateIndex opt) {
  const auto& election = inst.election();
  require_opt(election, opt);
  const auto borders = voting_borders(election);
  const double y_opt = election.y(opt);
  std::vector<Point> out;
  out.reserve(inst.n());
  for (const auto& x : inst.agents()) {
    const auto favs = favorite_candidates(election, x);
    if (favs.size() > 1) {
      out.push_back(x);
      continue;
    }
    const CandidateIndex j = favs.front();
    if (j == opt) {
      out.push_back(Point::on_line(y_opt));
    } else if (j < opt) {
      out.push_back(Point::on_line(borders[j]));
    } else {
      out.push_back(Point::on_line(borders[j - 1]));
    }
  }
  return inst.with_agents(std::move(out));
}

Instance tight_profile(const Instance& inst) {
  return tight_profile(inst, optimal_candidate(inst).index);
}

bool is_tight(const GroupedProfile& g, const Election& election, CandidateIndex opt) {
  require_opt(election, opt);
  const auto borders = voting_borders(election);
  const double y_opt = election.y(opt);
  return std::all_of(g.groups.begin(), g.groups.end(), [&](const Group& grp) {
    return same_location(grp.x, y_opt) || border_at(borders, grp.x).has_value();
  });
}

GroupedProfile left_compress(const GroupedProfile& g, const Election& election, CandidateIndex opt) {
  g.validate();
  if (!is_tight(g, election, opt)) {
    throw PreconditionFailed("left compression needs a tight profile");
  }
  if (g.groups.empty()) {
    return g;
  }
  const double y_opt = election.y(opt);
  const double x0 = g.groups.front().x;
  if (same_location(x0, y_opt) || x0 > y_opt) {
    return g;
  }
  const auto borders = voting_borders(election);
  const std::size_t k = *border_at(borders, x0);
  if (k + 1 < opt) {
    return with_group_moved(g, 0, borders[k + 1]);
  }
  return g;
}

GroupedProfile right_compress(const GroupedProfile& g, const Election& election, CandidateIndex opt) {
  g.validate();
  if (!is_tight(g, election, opt)) {
    throw PreconditionFailed("right compression needs a tight profile");
  }
  if (g.groups.empty()) {
    return g;
  }
  const double y_opt = election.y(opt);
  const std::size_t last = g.groups.size() - 1;
  const double x0 = g.groups[last].x;
  if (same_location(x0, y_opt) || x0 < y_opt) {
    return g;
  }
  const auto borders = voting_borders(election);
  const std::size_t k = *border_at(borders, x0);
  if (k > opt) {
    return with_group_moved(g, last, borders[k - 1]);
  }
  return g;
}

CompressionResult compress_fully(const Instance& inst) {
  const auto& election = inst.election();
  const CandidateIndex opt = optimal_candidate(inst).index;
  GroupedProfile g = GroupedProfile::from_instance(tight_profile(inst, opt));
  std::vector<GroupedProfile> trace{g};
  while (true) {
    bool moved = false;
    for (int side = 0; side < 2; ++side) {
      GroupedProfile next = side == 0 ? left_compress(g, election, opt) : right_compress(g, election, opt);
      if (!(next == g)) {
        g = std::move(next);
        trace.push_back(g);
        moved = true;
      }
    }
    if (!moved) {
      break;
    }
  }

  const auto borders = voting_borders(election);
  const double y_opt = election.y(opt);
  ThreeCandidateReduction red;
  for (const auto& grp : g.groups) {
    if (same_location(grp.x, y_opt)) {
      red.C += grp.count;
    } else if (grp.x < y_opt) {
      red.L += grp.count;
    } else {
      red.R += grp.count;
    }
  }
  const bool has_left = opt > 0;
  const bool has_right = opt + 1 < election.m();
  if (has_left && has_right) {
    red.beta = (y_opt - borders[opt - 1]) / (borders[opt] - y_opt);
  } else {
    red.beta = 1.0;
  }
  Instance final_instance = g.to_instance(election);
  return CompressionResult{opt, std::move(trace), red, std::move(final_instance)};
}

Votes outward_votes(const Instance& inst, CandidateIndex opt) {
  const auto& election = inst.election();
  if (opt >= election.m()) {
    throw InvalidInput("optimal candidate index out of range");
  }
  const Point& y_opt = election.candidate(opt);
  Votes votes;
  votes.reserve(inst.n());
  for (const auto& x : inst.agents()) {
    const auto favs = favorite_candidates(election, x);
    CandidateIndex pick = favs.front();
    double far = election.metric().distance(election.candidate(pick), y_opt);
    for (std::size_t k = 1; k < favs.size(); ++k) {
      const double d = election.metric().distance(election.candidate(favs[k]), y_opt);
      if (d > far) {
        pick = favs[k];
        far = d;
      }
    }
    votes.push_back(pick);
  }
  return votes;
}

Votes outward_votes(const Instance& inst) {
  return outward_votes(inst, optimal_candidate(inst).index);
}

ThreeCandidateRatio three_candidate_spike(const ThreeCandidateReduction& r) {
  const auto n = static_cast<std::int64_t>(r.n());
  if (n < 1) {
    throw InvalidInput("three-candidate profile needs at least one agent");
  }
  if (!(r.beta > 0.0) || !std::isfinite(r.beta)) {
    throw InvalidInput("beta must be positive");
  }
  const double L = static_cast<double>(r.L);
  const double C = static_cast<double>(r.C);
  const double R = static_cast<double>(r.R);
  const double b = r.beta;
  ThreeCandidateRatio out;
  const double f_left = spike_cdf(static_cast<std::int64_t>(r.L), n);
  const double f_center = spike_cdf(static_cast<std::int64_t>(r.L + r.C), n);
  out.p_left = f_left;
  out.p_center = f_center - f_left;
  out.p_right = 1.0 - f_center;
  out.cost_left = b * (L + 2 * C + 2 * R) + R;
  out.cost_center = L * b + R;
  out.cost_right = L * b + 2 * L + 2 * C + R;
  out.expected_cost =
      out.p_left * out.cost_left + out.p_center * out.cost_center + out.p_right * out.cost_right;
  if (out.cost_center > 0.0) {
    out.ratio = out.expected_cost / out.cost_center;
  } else if (out.expected_cost > 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.infinite = true;
  }
  return out;
}

double three_candidate_spike_ratio(const ThreeCandidateReduction& r) {
  return three_candidate_spike(r).ratio;
}

Instance realize_reduction(const ThreeCandidateReduction& r) {
  std::vector<double> xs;
  xs.insert(xs.end(), r.L, -r.beta);
  xs.insert(xs.end(), r.C, 0.0);
  xs.insert(xs.end(), r.R, 1.0);
  return Instance::on_line({-2.0 * r.beta, 0.0, 2.0}, xs);
}

} // namespace spikelab
