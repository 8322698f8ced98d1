#include "spikelab/evaluation.hpp"

#include <cmath>
#include <limits>

#include "spikelab/error.hpp"
#include "spikelab/format.hpp"

namespace spikelab {

double candidate_cost(const Instance& inst, CandidateIndex j) {
  if (j >= inst.m()) {
    throw InvalidInput("candidate index out of range");
  }
  double sum = 0.0;
  for (const auto& x : inst.agents()) {
    sum += inst.election().distance_to(x, j);
  }
  return sum;
}

std::vector<double> candidate_costs(const Instance& inst) {
  std::vector<double> costs(inst.m());
  for (std::size_t j = 0; j < inst.m(); ++j) {
    costs[j] = candidate_cost(inst, j);
  }
  return costs;
}

OptimalCandidate optimal_candidate(const Instance& inst) {
  const auto costs = candidate_costs(inst);
  OptimalCandidate best{0, costs[0]};
  for (std::size_t j = 1; j < costs.size(); ++j) {
    if (costs[j] < best.cost && !distances_tied(costs[j], best.cost)) {
      best = {j, costs[j]};
    }
  }
  return best;
}

double lottery_social_cost(const Lottery& lot, const std::vector<double>& costs) {
  if (lot.m() != costs.size()) {
    throw InvalidInput("lottery size does not match the candidate count");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < costs.size(); ++j) {
    if (lot.probs[j] != 0.0) {
      sum += lot.probs[j] * costs[j];
    }
  }
  return sum;
}

double lottery_social_cost(const Lottery& lot, const Instance& inst) {
  return lottery_social_cost(lot, candidate_costs(inst));
}

double agent_expected_cost(const Election& election, const Lottery& lot, const Point& x) {
  double sum = 0.0;
  for (std::size_t j = 0; j < lot.m(); ++j) {
    if (lot.probs[j] != 0.0) {
      sum += lot.probs[j] * election.distance_to(x, j);
    }
  }
  return sum;
}

std::vector<std::vector<Action>> truthful_actions(const Instance& inst, InputKind kind) {
  std::vector<std::vector<Action>> out(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const auto& x = inst.agent(i);
    switch (kind) {
    case InputKind::voting:
      for (auto j : favorite_candidates(inst.election(), x)) {
        out[i].emplace_back(Vote{j});
      }
      break;
    case InputKind::ranking:
      for (auto& r : true_rankings(inst.election(), x)) {
        out[i].emplace_back(std::move(r));
      }
      break;
    case InputKind::location:
      out[i].emplace_back(x);
      break;
    }
  }
  return out;
}

namespace {

std::size_t checked_product(const std::vector<std::vector<Action>>& options) {
  std::size_t total = 1;
  for (const auto& o : options) {
    total *= o.size();
    if (total > kMaxTruthfulProfiles) {
      throw SpaceOverflow("more than 2^20 truthful action profiles");
    }
  }
  return total;
}

} // namespace

std::size_t truthful_profile_count(const Instance& inst, InputKind kind) {
  return checked_product(truthful_actions(inst, kind));
}

void for_each_truthful_profile(const Instance& inst, InputKind kind,
                               const std::function<void(const ActionProfile&)>& fn) {
  const auto options = truthful_actions(inst, kind);
  checked_product(options);
  const std::size_t n = options.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<Action> current(n);
  for (std::size_t i = 0; i < n; ++i) {
    current[i] = options[i][0];
  }
  ActionProfile profile = make_profile(kind, current);
  while (true) {
    fn(profile);
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < options[k].size()) {
        set_action(profile, k, options[k][idx[k]]);
        break;
      }
      idx[k] = 0;
      set_action(profile, k, options[k][0]);
      if (k == 0) {
        return;
      }
    }
  }
}

std::vector<ActionProfile> truthful_action_profiles(const Instance& inst, InputKind kind) {
  std::vector<ActionProfile> out;
  for_each_truthful_profile(inst, kind, [&](const ActionProfile& a) { out.push_back(a); });
  return out;
}

WorstCase worst_truthful_social_cost(const Mechanism& mech, const Instance& inst) {
  const auto costs = candidate_costs(inst);
  WorstCase worst;
  bool first = true;
  for_each_truthful_profile(inst, mech.input_kind(), [&](const ActionProfile& a) {
    Lottery lot = mech(inst.election(), a);
    const double c = lottery_social_cost(lot, costs);
    if (first || c > worst.cost) {
      worst = {c, a, std::move(lot)};
      first = false;
    }
  });
  return worst;
}

RatioReport make_ratio(double worst, const OptimalCandidate& opt) {
  RatioReport r;
  r.worst_truthful_cost = worst;
  r.optimal_cost = opt.cost;
  r.optimal_candidate = opt.index;
  if (opt.cost > 0.0) {
    r.ratio = worst / opt.cost;
  } else if (worst > 0.0) {
    r.ratio = std::numeric_limits<double>::infinity();
    r.infinite = true;
  } else {
    r.ratio = 1.0;
  }
  return r;
}

RatioReport approximation_ratio(const Mechanism& mech, const Instance& inst) {
  auto worst = worst_truthful_social_cost(mech, inst);
  RatioReport r = make_ratio(worst.cost, optimal_candidate(inst));
  r.witness = std::move(worst.witness);
  r.lottery = std::move(worst.lottery);
  return r;
}

RatioReport ratio_for_profile(const Mechanism& mech, const Instance& inst,
                              const ActionProfile& profile) {
  Lottery lot = mech(inst.election(), profile);
  RatioReport r = make_ratio(lottery_social_cost(lot, inst), optimal_candidate(inst));
  r.witness = profile;
  r.lottery = std::move(lot);
  return r;
}

std::string ratio_csv_header() {
  return "instance-id,mechanism,worst_cost,opt_cost,opt_candidate,ratio";
}

std::string ratio_csv_row(const std::string& instance_id, const std::string& mechanism,
                          const RatioReport& r) {
  return csv_field(instance_id) + "," + csv_field(mechanism) + "," + format_number(r.worst_truthful_cost) + "," +
         format_number(r.optimal_cost) + "," + std::to_string(r.optimal_candidate + 1) + "," +
         format_number(r.ratio);
}

} // namespace spikelab
