#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "spikelab/geometry.hpp"

namespace spikelab {

enum class InputKind { voting, ranking, location };

std::string to_string(InputKind kind);
InputKind parse_input_kind(const std::string& s);

/// Declared incentive class of a mechanism.
enum class Truthfulness {
  none,
  truthful_in_expectation,
  universal,     // mixture of deterministic truthful mechanisms
  deterministic, // deterministic and truthful
};

std::string to_string(Truthfulness t);

using Vote = CandidateIndex;
using Votes = std::vector<Vote>;
using Rankings = std::vector<Ranking>;
using Locations = std::vector<Point>;

/// What the agents submit. The variant index matches InputKind.
using ActionProfile = std::variant<Votes, Rankings, Locations>;
/// One agent's submission.
using Action = std::variant<Vote, Ranking, Point>;

InputKind kind_of(const ActionProfile& profile);
std::size_t profile_size(const ActionProfile& profile);
Action action_at(const ActionProfile& profile, std::size_t i);
void set_action(ActionProfile& profile, std::size_t i, const Action& a);
/// Profile built from one action per agent; all actions must share a kind.
ActionProfile make_profile(InputKind kind, const std::vector<Action>& actions);

/// Probability vector over candidates.
struct Lottery {
  std::vector<double> probs;

  static Lottery point_mass(std::size_t m, CandidateIndex j);
  static Lottery uniform(std::size_t m);

  std::size_t m() const noexcept { return probs.size(); }
  double operator[](std::size_t j) const { return probs[j]; }
  /// Index of the unit entry, or m() when the lottery is not a point mass.
  std::size_t point_mass_index() const noexcept;
  /// Throws InvalidInput unless entries are >= 0 and sum to 1 within 1e-12.
  void validate() const;

  bool approx_equal(const Lottery& other, double tol) const;
};

/// A named pure map from action profiles to lotteries over the candidates.
/// The evaluator only ever sees the public election and the submitted actions.
class Mechanism {
public:
  using Evaluator = std::function<Lottery(const Election&, const ActionProfile&)>;

  Mechanism(std::string name, InputKind kind, bool randomized, Truthfulness truthfulness,
            Evaluator evaluator);

  const std::string& name() const noexcept { return name_; }
  InputKind input_kind() const noexcept { return kind_; }
  bool randomized() const noexcept { return randomized_; }
  Truthfulness truthfulness() const noexcept { return truthfulness_; }

  /// Checks the profile against the declared kind and the election, evaluates,
  /// and validates the resulting lottery.
  Lottery operator()(const Election& election, const ActionProfile& profile) const;

private:
  std::string name_;
  InputKind kind_;
  bool randomized_;
  Truthfulness truthfulness_;
  std::shared_ptr<const Evaluator> evaluator_;
};

/// Throws InvalidInput when the profile is malformed for the election
/// (vote out of range, ranking not a permutation, point outside the metric).
void validate_profile(const Election& election, const ActionProfile& profile);

} // namespace spikelab
