#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/mechanism.hpp"
#include "spikelab/truthfulness.hpp"

namespace spikelab {

struct ProfileOption {
  double weight = 1.0;
  ActionProfile profile;
};
using ProfileDistribution = std::vector<ProfileOption>;

/// Map between action kinds, applied to whole profiles so that it may depend
/// on the profile (tie-breaking maps) or correlate agents (q-mixing).
struct ConsistentMap {
  std::string name;
  InputKind from = InputKind::voting;
  InputKind to = InputKind::voting;
  std::function<ProfileDistribution(const Election&, const ActionProfile&)> apply;
};

/// kind a is finer than kind b (location > ranking > voting).
bool finer(InputKind a, InputKind b);

ConsistentMap top_of_ranking();
/// Favorite candidate; lowest index on a border.
ConsistentMap favorite_of_location();
/// First true ranking in lexicographic order.
ConsistentMap ranking_of_location();
/// Voted candidate first, the rest by distance from it, ties by index.
ConsistentMap canonical_ranking_of_vote();
/// Zone representative of the ranking (line only).
ConsistentMap representative_of_ranking();
/// A vote for C_j becomes the location y_j.
ConsistentMap vote_to_candidate_location();
/// Locations to rankings, breaking border ties toward the candidate M elects
/// (the max-probability candidate, lowest index on ties): each border agent
/// takes the true ranking of a point nudged toward that candidate.
ConsistentMap tie_breaking_ranking_map(const Mechanism& location_mech);
/// Two candidates on the line. Off-border agents vote their favorite; all
/// border agents jointly vote C1 with probability q and C2 otherwise, where
/// q solves p2 q + p3 (1 - q) = p1 on the (n1, n2, n3) configuration.
ConsistentMap two_candidate_mixing_map(const Mechanism& location_mech);

/// Composition: M evaluated on the map's image, mixed by the map's weights.
Lottery evaluate_through(const Mechanism& mech, const ConsistentMap& map, const Election& election,
                         const ActionProfile& profile);

/// Exposes M on a finer input kind by discarding the extra information.
Mechanism lift(const Mechanism& mech, InputKind to_kind);

/// Deterministic truthful location M as a ranking mechanism: each ranking is
/// replaced by its zone representative.
Mechanism project_location_to_ranking(const Mechanism& location_mech);
/// Two-candidate location M as a voting mechanism: votes become candidate
/// locations.
Mechanism project_location_to_voting_2cand(const Mechanism& location_mech);

struct MixingProbabilities {
  double p1 = 0.0; // (n1, n2, n3)
  double p2 = 0.0; // (n1 + n2, 0, n3)
  double p3 = 0.0; // (n1, 0, n2 + n3)
  double q = 1.0;
};

/// Probabilities of C1 on the three Claim-6 profiles and the mixing weight.
/// Throws InvalidInput when p2 = p3 but p1 differs (M cannot be TIE).
MixingProbabilities two_candidate_mixing(const Mechanism& location_mech, const Election& election,
                                         std::size_t n1, std::size_t n2, std::size_t n3);

struct ReductionReport {
  bool passed = true;
  std::size_t instances = 0;
  std::size_t profiles = 0;
  std::size_t mismatches = 0;
  std::size_t inconsistent = 0; // mapped actions that are not true actions
  double max_difference = 0.0;
  std::string first_failure;
};

/// For every sampled instance and truthful profile a of M's kind: M(a) equals
/// reduced(map(a)) within tol per component, and for finer-to-coarser maps every
/// mapped action is a true action.
ReductionReport check_reduction(const Mechanism& mech, const Mechanism& reduced,
                                const ConsistentMap& map, const InstanceFamily& sample,
                                double tol = 1e-9);

struct NonReducibilityWitness {
  ActionProfile first;
  ActionProfile second;
  Lottery lottery_first;
  Lottery lottery_second;
};

/// Location M vs ranking mechanisms: two single-agent-deviation profiles from
/// base whose varied agent has the same unique true ranking but whose
/// lotteries differ.
std::optional<NonReducibilityWitness> find_location_ranking_witness(const Mechanism& location_mech,
                                                                    const Instance& base,
                                                                    std::size_t agent,
                                                                    const std::vector<double>& points);

/// Ranking M vs voting mechanisms: two rankings of one agent with the same top
/// whose lotteries differ, others fixed at base.
std::optional<NonReducibilityWitness> find_ranking_voting_witness(const Mechanism& ranking_mech,
                                                                  const Election& election,
                                                                  const Rankings& base, std::size_t agent);

} // namespace spikelab
