#pragma once

#include <cstddef>
#include <vector>

#include "spikelab/mechanism.hpp"

namespace spikelab {

struct Group {
  double x = 0.0;
  std::size_t count = 0;

  friend bool operator==(const Group&, const Group&) = default;
};

/// Agents on the line bucketed by location; groups strictly increasing in x.
struct GroupedProfile {
  std::vector<Group> groups;

  static GroupedProfile from_locations(std::vector<double> xs);
  static GroupedProfile from_instance(const Instance& inst);

  std::size_t n() const;
  /// Expanded sorted agent locations.
  std::vector<double> locations() const;
  Instance to_instance(const Election& election) const;
  /// Throws InvalidInput unless counts >= 1 and locations strictly increase.
  void validate() const;

  friend bool operator==(const GroupedProfile&, const GroupedProfile&) = default;
};

struct ThreeCandidateReduction {
  std::size_t L = 0; // agents at b_L = b_{opt-1}
  std::size_t C = 0; // agents at y_C = y_opt
  std::size_t R = 0; // agents at b_C = b_opt
  double beta = 1.0; // y_C - b_L with b_C - y_C scaled to 1

  std::size_t n() const noexcept { return L + C + R; }
};

/// Each agent moves within its voting zone as close as possible to y_opt.
/// Border agents stay put.
Instance tight_profile(const Instance& inst, CandidateIndex opt);
Instance tight_profile(const Instance& inst);

/// True when every agent sits on a voting border or on y_opt.
bool is_tight(const GroupedProfile& g, const Election& election, CandidateIndex opt);

/// Moves the leftmost group from b_j to b_{j+1} when b_{j+1} < y_opt.
/// Throws PreconditionFailed when g is not tight.
GroupedProfile left_compress(const GroupedProfile& g, const Election& election, CandidateIndex opt);
/// Mirror of left_compress.
GroupedProfile right_compress(const GroupedProfile& g, const Election& election, CandidateIndex opt);

struct CompressionResult {
  CandidateIndex opt = 0;
  std::vector<GroupedProfile> trace; // tight profile first, then one entry per move
  ThreeCandidateReduction reduction;
  Instance final_instance;
};

/// Tightens, then applies left and right compressions until neither moves.
CompressionResult compress_fully(const Instance& inst);

/// Border agents vote for the tied favorite farther from y_opt; everyone else
/// votes the unique favorite.
Votes outward_votes(const Instance& inst, CandidateIndex opt);
Votes outward_votes(const Instance& inst);

struct ThreeCandidateRatio {
  double p_left = 0.0, p_center = 0.0, p_right = 0.0;
  double cost_left = 0.0, cost_center = 0.0, cost_right = 0.0;
  double expected_cost = 0.0;
  double ratio = 1.0;
  bool infinite = false;
};

/// Closed-form spike ratio on the three-location profile:
///   SC(C_L) = beta(L+2C+2R) + R, SC(C_C) = L beta + R, SC(C_R) = L beta + 2L + 2C + R.
ThreeCandidateRatio three_candidate_spike(const ThreeCandidateReduction& r);
double three_candidate_spike_ratio(const ThreeCandidateReduction& r);

/// A concrete line instance realizing r: candidates at (-2 beta, 0, 2) with
/// L agents at -beta, C at 0 and R at 1.
Instance realize_reduction(const ThreeCandidateReduction& r);

} // namespace spikelab
