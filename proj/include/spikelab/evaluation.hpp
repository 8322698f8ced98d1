#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "spikelab/mechanism.hpp"

namespace spikelab {

/// Upper limit on the number of truthful profiles enumerated for one instance.
inline constexpr std::size_t kMaxTruthfulProfiles = std::size_t{1} << 20;

/// Sum of distances from all agents to candidate j.
double candidate_cost(const Instance& inst, CandidateIndex j);
std::vector<double> candidate_costs(const Instance& inst);

struct OptimalCandidate {
  CandidateIndex index = 0;
  double cost = 0.0;
};

/// argmin of candidate_cost. Ties (within the tie tolerance) go to the lowest
/// index, which on the line is the leftmost candidate.
OptimalCandidate optimal_candidate(const Instance& inst);

/// Sum over j of probs[j] * candidate_cost(j).
double lottery_social_cost(const Lottery& lot, const Instance& inst);
double lottery_social_cost(const Lottery& lot, const std::vector<double>& costs);

/// Expected distance from x to the lottery's outcome.
double agent_expected_cost(const Election& election, const Lottery& lot, const Point& x);

/// Number of truthful profiles of the given kind; throws SpaceOverflow above
/// kMaxTruthfulProfiles.
std::size_t truthful_profile_count(const Instance& inst, InputKind kind);

/// Calls fn on every truthful profile, in odometer order (last agent fastest).
/// Voting: product of favorite candidates. Ranking: product of true rankings.
/// Location: the single profile x.
void for_each_truthful_profile(const Instance& inst, InputKind kind,
                               const std::function<void(const ActionProfile&)>& fn);
std::vector<ActionProfile> truthful_action_profiles(const Instance& inst, InputKind kind);

/// Per-agent truthful actions of the given kind.
std::vector<std::vector<Action>> truthful_actions(const Instance& inst, InputKind kind);

struct WorstCase {
  double cost = 0.0;
  ActionProfile witness;
  Lottery lottery;
};

/// Max lottery_social_cost over all truthful profiles. The first maximizer in
/// enumeration order is kept as witness.
WorstCase worst_truthful_social_cost(const Mechanism& mech, const Instance& inst);

struct RatioReport {
  double worst_truthful_cost = 0.0;
  double optimal_cost = 0.0;
  CandidateIndex optimal_candidate = 0;
  double ratio = 1.0;
  bool infinite = false; // optimal cost 0 with positive mechanism cost
  ActionProfile witness;
  Lottery lottery;
};

RatioReport approximation_ratio(const Mechanism& mech, const Instance& inst);
/// Ratio of a fixed action profile rather than the worst truthful one.
RatioReport ratio_for_profile(const Mechanism& mech, const Instance& inst,
                              const ActionProfile& profile);

/// worst/opt with the conventions of RatioReport (0/0 = 1, x/0 = infinite).
RatioReport make_ratio(double worst, const OptimalCandidate& opt);

/// instance-id,mechanism,worst_cost,opt_cost,opt_candidate,ratio
std::string ratio_csv_header();
std::string ratio_csv_row(const std::string& instance_id, const std::string& mechanism,
                          const RatioReport& r);

} // namespace spikelab
