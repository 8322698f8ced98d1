#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikelab/mechanism.hpp"

namespace spikelab {

/// Cumulative distribution of the spike mechanism over the cumulative vote
/// count t out of n:
///   t <= n/2 : t / (2(n - t))
///   t >  n/2 : 1.5 - n / (2t)
/// Throws InvalidInput unless 0 <= t <= n and n >= 1.
double spike_cdf(std::int64_t t, std::int64_t n);

/// Percentile weights of a WPV mechanism: p[k] is the probability of electing
/// the (k+1)-th smallest vote. Independent of the reports.
class WpvWeights {
public:
  explicit WpvWeights(std::vector<double> p);

  static WpvWeights uniform(std::size_t n);
  /// All mass on the k-th smallest vote, k in 1..n.
  static WpvWeights point_mass(std::size_t n, std::size_t k);
  /// p_k = F(k) - F(k-1) with F the spike CDF. Summed over a candidate's run
  /// of sorted votes this telescopes to the spike lottery.
  static WpvWeights spike(std::size_t n);

  std::size_t n() const noexcept { return p_.size(); }
  const std::vector<double>& p() const noexcept { return p_; }
  double operator[](std::size_t k) const { return p_[k]; }

private:
  std::vector<double> p_;
};

/// Votes reordered by candidate location, ties kept in agent order.
Votes sorted_by_location(const Election& election, const Votes& votes);

Lottery spike_lottery(const Election& election, const Votes& votes);
Lottery wpv_lottery(const Election& election, const WpvWeights& w, const Votes& votes);
Lottery random_dictator_lottery(const Election& election, const Votes& votes);
/// Candidate of the k-th smallest vote, k in 1..n.
CandidateIndex percentile_vote(const Election& election, const Votes& votes, std::size_t k);

Mechanism spike();
Mechanism wpv(WpvWeights weights);
/// Deterministic k-th percentile vote (1-based), for any n >= k.
Mechanism percentile(std::size_t k);
/// The ceil(n/2)-th smallest vote.
Mechanism median();
/// Works in every metric: the lottery is the vote share.
Mechanism random_dictator();

/// Two agents, three candidates on the line. Elects C1 when both rankings lie
/// in the two leftmost ranking zones, C3 otherwise.
Mechanism claim1_ranking();
/// Candidates fixed at (0, 3, 4). A uniformly chosen agent's report selects
/// (1/3,1/3,1/3) when it is <= 1 and (1/4,1/2,1/4) otherwise.
Mechanism claim4_location();
/// Two candidates. A uniformly chosen agent's vote wins with probability 0.9.
Mechanism claim5_tie_voting();
/// Uniform lottery regardless of the rankings.
Mechanism uniform_ranking();

/// Two candidates, location input: C1 gets (#closer to C1 + share * #on border) / n.
Mechanism border_fraction(double share);

/// Elects agent i's vote (0-based i).
Mechanism dictator(std::size_t i);
/// Two candidates: elects the candidate agent i did not vote for.
Mechanism anti_dictator(std::size_t i);
/// Always elects candidate j, ignoring the reports.
Mechanism constant(InputKind kind, CandidateIndex j);

struct WeightedMechanism {
  double weight = 0.0;
  Mechanism mechanism;
};

/// The realized draws of the claim5 mechanism for n agents: dictator(i) with
/// weight 0.9/n and anti_dictator(i) with weight 0.1/n.
std::vector<WeightedMechanism> claim5_components(std::size_t n);

/// Registry lookup: "spike", "median", "random-dictator", "percentile:k",
/// "wpv:p1,p2,...", "claim1", "claim4", "claim5", "uniform-ranking",
/// "border-fraction:s". Throws InvalidInput for unknown names.
Mechanism make_mechanism(const std::string& spec);
std::vector<std::string> registry_names();

} // namespace spikelab
