#include "spikelab/reductions.hpp"

#include <algorithm>
#include <cmath>

#include "spikelab/error.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/format.hpp"

namespace spikelab {

namespace {

int granularity(InputKind k) {
  switch (k) {
  case InputKind::voting:
    return 0;
  case InputKind::ranking:
    return 1;
  case InputKind::location:
    return 2;
  }
  return 0;
}

void require_kind(const ActionProfile& profile, InputKind kind, const std::string& who) {
  if (kind_of(profile) != kind) {
    throw InvalidInput(who + " expects " + to_string(kind) + " input");
  }
}

/// Wraps a per-agent deterministic map as a profile-level ConsistentMap.
ConsistentMap pointwise(std::string name, InputKind from, InputKind to,
                        std::function<Action(const Election&, const Action&)> f) {
  ConsistentMap map;
  map.name = name;
  map.from = from;
  map.to = to;
  map.apply = [name, from, to, f = std::move(f)](const Election& e, const ActionProfile& a) {
    require_kind(a, from, name);
    const std::size_t n = profile_size(a);
    std::vector<Action> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(f(e, action_at(a, i)));
    }
    return ProfileDistribution{{1.0, make_profile(to, out)}};
  };
  return map;
}

CandidateIndex argmax_lowest(const Lottery& lot) {
  CandidateIndex best = 0;
  for (std::size_t j = 1; j < lot.m(); ++j) {
    if (lot.probs[j] > lot.probs[best]) {
      best = j;
    }
  }
  return best;
}

Action extract(const Election& e, const Action& a, InputKind to) {
  if (a.index() == static_cast<std::size_t>(to)) {
    return a;
  }
  if (const auto* r = std::get_if<Ranking>(&a)) {
    return Vote{r->front()};
  }
  const auto& x = std::get<Point>(a);
  if (to == InputKind::voting) {
    return Vote{favorite_candidates(e, x).front()};
  }
  return true_rankings(e, x).front();
}

ActionProfile extract_profile(const Election& e, const ActionProfile& a, InputKind to) {
  const std::size_t n = profile_size(a);
  std::vector<Action> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(extract(e, action_at(a, i), to));
  }
  return make_profile(to, out);
}

} // namespace

bool finer(InputKind a, InputKind b) { return granularity(a) > granularity(b); }

ConsistentMap top_of_ranking() {
  return pointwise("top-of-ranking", InputKind::ranking, InputKind::voting,
                   [](const Election&, const Action& a) -> Action {
                     return Vote{std::get<Ranking>(a).front()};
                   });
}

ConsistentMap favorite_of_location() {
  return pointwise("favorite-of-location", InputKind::location, InputKind::voting,
                   [](const Election& e, const Action& a) -> Action {
                     return Vote{favorite_candidates(e, std::get<Point>(a)).front()};
                   });
}

ConsistentMap ranking_of_location() {
  return pointwise("ranking-of-location", InputKind::location, InputKind::ranking,
                   [](const Election& e, const Action& a) -> Action {
                     return true_rankings(e, std::get<Point>(a)).front();
                   });
}

ConsistentMap canonical_ranking_of_vote() {
  return pointwise("canonical-ranking-of-vote", InputKind::voting, InputKind::ranking,
                   [](const Election& e, const Action& a) -> Action {
                     const Vote v = std::get<Vote>(a);
                     Ranking r(e.m());
                     for (std::size_t j = 0; j < r.size(); ++j) {
                       r[j] = j;
                     }
                     const Point& yv = e.candidate(v);
                     std::stable_sort(r.begin(), r.end(), [&](CandidateIndex p, CandidateIndex q) {
                       return e.distance_to(yv, p) < e.distance_to(yv, q);
                     });
                     return r;
                   });
}

ConsistentMap representative_of_ranking() {
  return pointwise("representative-of-ranking", InputKind::ranking, InputKind::location,
                   [](const Election& e, const Action& a) -> Action {
                     const auto zones = ranking_zones_line(e);
                     const auto z = zones.zone_of(std::get<Ranking>(a));
                     if (!z) {
                       throw InvalidInput("ranking matches no ranking zone");
                     }
                     return Point::on_line(zones.zones[*z].representative);
                   });
}

ConsistentMap vote_to_candidate_location() {
  return pointwise("vote-to-location", InputKind::voting, InputKind::location,
                   [](const Election& e, const Action& a) -> Action {
                     return e.candidate(std::get<Vote>(a));
                   });
}

ConsistentMap tie_breaking_ranking_map(const Mechanism& location_mech) {
  if (location_mech.input_kind() != InputKind::location) {
    throw InvalidInput("tie-breaking map needs a location mechanism");
  }
  ConsistentMap map;
  map.name = "tie-break(" + location_mech.name() + ")";
  map.from = InputKind::location;
  map.to = InputKind::ranking;
  map.apply = [mech = location_mech, name = map.name](const Election& e, const ActionProfile& a) {
    require_kind(a, InputKind::location, name);
    const CandidateIndex j = argmax_lowest(mech(e, a));
    const Point& yj = e.candidate(j);
    const auto& locs = std::get<Locations>(a);
    Rankings out;
    for (const auto& x : locs) {
      auto options = true_rankings(e, x);
      if (options.size() == 1) {
        out.push_back(std::move(options.front()));
        continue;
      }
      std::optional<Ranking> pick;
      if (e.metric().kind() != MetricKind::explicit_matrix) {
        std::vector<double> dir(x.dim());
        double norm = 0.0;
        for (std::size_t k = 0; k < dir.size(); ++k) {
          dir[k] = yj.coords[k] - x.coords[k];
          norm += dir[k] * dir[k];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
          std::fill(dir.begin(), dir.end(), 0.0);
          dir[0] = 1.0;
          norm = 1.0;
        }
        const double eps = 1e-6 * std::max(1.0, norm);
        Point nudged = x;
        for (std::size_t k = 0; k < dir.size(); ++k) {
          nudged.coords[k] += eps * dir[k] / norm;
        }
        const auto near = true_rankings(e, nudged);
        if (near.size() == 1 && std::find(options.begin(), options.end(), near.front()) != options.end()) {
          pick = near.front();
        }
      }
      if (!pick) {
        // Earliest position of C_j, then lexicographic.
        pick = *std::min_element(options.begin(), options.end(), [&](const Ranking& p, const Ranking& q) {
          const auto pp = std::find(p.begin(), p.end(), j) - p.begin();
          const auto pq = std::find(q.begin(), q.end(), j) - q.begin();
          return pp != pq ? pp < pq : p < q;
        });
      }
      out.push_back(std::move(*pick));
    }
    return ProfileDistribution{{1.0, std::move(out)}};
  };
  return map;
}

MixingProbabilities two_candidate_mixing(const Mechanism& location_mech, const Election& election,
                                         std::size_t n1, std::size_t n2, std::size_t n3) {
  if (election.m() != 2 || !election.on_line_metric()) {
    throw InvalidInput("two-candidate mixing needs exactly 2 candidates on the line");
  }
  if (n1 + n2 + n3 == 0) {
    throw InvalidInput("two-candidate mixing needs at least one agent");
  }
  const double y1 = election.y(0);
  const double y2 = election.y(1);
  const double b = (y1 + y2) / 2.0;
  auto prob_c1 = [&](std::size_t a, std::size_t m, std::size_t c) {
    Locations locs;
    locs.insert(locs.end(), a, Point::on_line(y1));
    locs.insert(locs.end(), m, Point::on_line(b));
    locs.insert(locs.end(), c, Point::on_line(y2));
    return location_mech(election, locs).probs[0];
  };
  MixingProbabilities out;
  out.p1 = prob_c1(n1, n2, n3);
  out.p2 = prob_c1(n1 + n2, 0, n3);
  out.p3 = prob_c1(n1, 0, n2 + n3);
  if (n2 == 0) {
    out.q = 1.0;
    return out;
  }
  if (std::abs(out.p2 - out.p3) <= 1e-12) {
    if (std::abs(out.p1 - out.p2) > 1e-9) {
      throw InvalidInput("p2 = p3 but p1 differs; the mechanism is not truthful in expectation");
    }
    out.q = 0.5;
    return out;
  }
  out.q = (out.p1 - out.p3) / (out.p2 - out.p3);
  if (out.q < -1e-9 || out.q > 1.0 + 1e-9) {
    throw InvalidInput("mixing weight " + format_number(out.q) +
                       " outside [0,1]; the mechanism is not truthful in expectation");
  }
  out.q = std::clamp(out.q, 0.0, 1.0);
  return out;
}

ConsistentMap two_candidate_mixing_map(const Mechanism& location_mech) {
  if (location_mech.input_kind() != InputKind::location) {
    throw InvalidInput("mixing map needs a location mechanism");
  }
  ConsistentMap map;
  map.name = "mixing(" + location_mech.name() + ")";
  map.from = InputKind::location;
  map.to = InputKind::voting;
  map.apply = [mech = location_mech, name = map.name](const Election& e, const ActionProfile& a) {
    require_kind(a, InputKind::location, name);
    const auto& locs = std::get<Locations>(a);
    Votes base(locs.size());
    std::vector<std::size_t> border;
    std::size_t n1 = 0;
    std::size_t n3 = 0;
    for (std::size_t i = 0; i < locs.size(); ++i) {
      const auto favs = favorite_candidates(e, locs[i]);
      if (favs.size() > 1) {
        border.push_back(i);
      } else {
        base[i] = favs.front();
        (favs.front() == 0 ? n1 : n3) += 1;
      }
    }
    if (border.empty()) {
      return ProfileDistribution{{1.0, base}};
    }
    const auto mix = two_candidate_mixing(mech, e, n1, border.size(), n3);
    Votes left = base;
    Votes right = base;
    for (auto i : border) {
      left[i] = 0;
      right[i] = 1;
    }
    return ProfileDistribution{{mix.q, left}, {1.0 - mix.q, right}};
  };
  return map;
}

Lottery evaluate_through(const Mechanism& mech, const ConsistentMap& map, const Election& election,
                         const ActionProfile& profile) {
  Lottery out{std::vector<double>(election.m(), 0.0)};
  for (const auto& opt : map.apply(election, profile)) {
    if (opt.weight == 0.0) {
      continue;
    }
    const Lottery lot = mech(election, opt.profile);
    for (std::size_t j = 0; j < out.m(); ++j) {
      out.probs[j] += opt.weight * lot.probs[j];
    }
  }
  return out;
}

Mechanism lift(const Mechanism& mech, InputKind to_kind) {
  if (!finer(to_kind, mech.input_kind())) {
    throw InvalidInput("cannot lift " + to_string(mech.input_kind()) + " to " + to_string(to_kind) +
                       ": target is not finer");
  }
  const InputKind inner = mech.input_kind();
  return Mechanism("lift(" + mech.name() + "," + to_string(to_kind) + ")", to_kind, mech.randomized(),
                   mech.truthfulness(), [mech, inner](const Election& e, const ActionProfile& a) {
                     return mech(e, extract_profile(e, a, inner));
                   });
}

Mechanism project_location_to_ranking(const Mechanism& location_mech) {
  if (location_mech.input_kind() != InputKind::location) {
    throw InvalidInput("projection needs a location mechanism");
  }
  const auto map = representative_of_ranking();
  return Mechanism("project-ranking(" + location_mech.name() + ")", InputKind::ranking,
                   location_mech.randomized(), location_mech.truthfulness(),
                   [location_mech, map](const Election& e, const ActionProfile& a) {
                     return evaluate_through(location_mech, map, e, a);
                   });
}

Mechanism project_location_to_voting_2cand(const Mechanism& location_mech) {
  if (location_mech.input_kind() != InputKind::location) {
    throw InvalidInput("projection needs a location mechanism");
  }
  const auto map = vote_to_candidate_location();
  return Mechanism("project-voting(" + location_mech.name() + ")", InputKind::voting,
                   location_mech.randomized(), location_mech.truthfulness(),
                   [location_mech, map](const Election& e, const ActionProfile& a) {
                     if (e.m() != 2 || !e.on_line_metric()) {
                       throw InvalidInput("two-candidate projection needs 2 candidates on the line");
                     }
                     return evaluate_through(location_mech, map, e, a);
                   });
}

ReductionReport check_reduction(const Mechanism& mech, const Mechanism& reduced,
                                const ConsistentMap& map, const InstanceFamily& sample, double tol) {
  if (map.from != mech.input_kind() || map.to != reduced.input_kind()) {
    throw InvalidInput("map " + map.name + " does not connect " + to_string(mech.input_kind()) + " to " +
                       to_string(reduced.input_kind()));
  }
  ReductionReport report;
  const bool check_truth = finer(map.from, map.to);
  for (std::size_t s = 0; s < sample.size; ++s) {
    const Instance inst = sample.at(s);
    ++report.instances;
    const auto& e = inst.election();
    const auto target_truth = check_truth ? truthful_actions(inst, map.to) : std::vector<std::vector<Action>>{};
    for_each_truthful_profile(inst, mech.input_kind(), [&](const ActionProfile& a) {
      ++report.profiles;
      const Lottery direct = mech(e, a);
      Lottery mixed{std::vector<double>(e.m(), 0.0)};
      for (const auto& opt : map.apply(e, a)) {
        if (check_truth) {
          for (std::size_t i = 0; i < inst.n(); ++i) {
            const auto& ok = target_truth[i];
            if (std::find(ok.begin(), ok.end(), action_at(opt.profile, i)) == ok.end()) {
              ++report.inconsistent;
              report.passed = false;
              if (report.first_failure.empty()) {
                report.first_failure = "instance " + std::to_string(s) + ": agent " + std::to_string(i + 1) +
                                       " mapped to an untrue action";
              }
            }
          }
        }
        if (opt.weight == 0.0) {
          continue;
        }
        const Lottery lot = reduced(e, opt.profile);
        for (std::size_t j = 0; j < mixed.m(); ++j) {
          mixed.probs[j] += opt.weight * lot.probs[j];
        }
      }
      double diff = 0.0;
      for (std::size_t j = 0; j < e.m(); ++j) {
        diff = std::max(diff, std::abs(direct.probs[j] - mixed.probs[j]));
      }
      report.max_difference = std::max(report.max_difference, diff);
      if (diff > tol) {
        ++report.mismatches;
        report.passed = false;
        if (report.first_failure.empty()) {
          report.first_failure = "instance " + std::to_string(s) + ": lotteries differ by " + format_number(diff);
        }
      }
    });
  }
  return report;
}

std::optional<NonReducibilityWitness> find_location_ranking_witness(const Mechanism& location_mech,
                                                                    const Instance& base,
                                                                    std::size_t agent,
                                                                    const std::vector<double>& points) {
  if (location_mech.input_kind() != InputKind::location) {
    throw InvalidInput("witness search needs a location mechanism");
  }
  const auto& e = base.election();
  struct Probe {
    Ranking ranking;
    Locations profile;
    Lottery lottery;
  };
  std::vector<Probe> probes;
  for (double p : points) {
    const Point x = Point::on_line(p);
    const auto rankings = true_rankings(e, x);
    if (rankings.size() != 1) {
      continue;
    }
    Locations locs = base.agents();
    locs.at(agent) = x;
    probes.push_back({rankings.front(), locs, location_mech(e, locs)});
  }
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = a + 1; b < probes.size(); ++b) {
      if (probes[a].ranking == probes[b].ranking && !probes[a].lottery.approx_equal(probes[b].lottery, 1e-9)) {
        return NonReducibilityWitness{probes[a].profile, probes[b].profile, probes[a].lottery, probes[b].lottery};
      }
    }
  }
  return std::nullopt;
}

std::optional<NonReducibilityWitness> find_ranking_voting_witness(const Mechanism& ranking_mech,
                                                                  const Election& election,
                                                                  const Rankings& base, std::size_t agent) {
  if (ranking_mech.input_kind() != InputKind::ranking) {
    throw InvalidInput("witness search needs a ranking mechanism");
  }
  const auto rankings = all_rankings(election.m());
  std::vector<std::pair<Rankings, Lottery>> probes;
  for (const auto& r : rankings) {
    Rankings prof = base;
    prof.at(agent) = r;
    probes.emplace_back(prof, ranking_mech(election, prof));
  }
  for (std::size_t a = 0; a < probes.size(); ++a) {
    for (std::size_t b = a + 1; b < probes.size(); ++b) {
      if (rankings[a].front() == rankings[b].front() &&
          !probes[a].second.approx_equal(probes[b].second, 1e-9)) {
        return NonReducibilityWitness{probes[a].first, probes[b].first, probes[a].second, probes[b].second};
      }
    }
  }
  return std::nullopt;
}

} // namespace spikelab
