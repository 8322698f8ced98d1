#include "spikelab/mechanism.hpp"

#include <cmath>

#include "spikelab/error.hpp"

namespace spikelab {

std::string to_string(InputKind kind) {
  switch (kind) {
  case InputKind::voting:
    return "voting";
  case InputKind::ranking:
    return "ranking";
  case InputKind::location:
    return "location";
  }
  return "unknown";
}

InputKind parse_input_kind(const std::string& s) {
  if (s == "voting" || s == "vote" || s == "votes") {
    return InputKind::voting;
  }
  if (s == "ranking" || s == "rankings") {
    return InputKind::ranking;
  }
  if (s == "location" || s == "locations") {
    return InputKind::location;
  }
  throw InvalidInput("unknown input kind '" + s + "'");
}

std::string to_string(Truthfulness t) {
  switch (t) {
  case Truthfulness::none:
    return "none";
  case Truthfulness::truthful_in_expectation:
    return "truthful-in-expectation";
  case Truthfulness::universal:
    return "universally-truthful";
  case Truthfulness::deterministic:
    return "deterministic-truthful";
  }
  return "unknown";
}

InputKind kind_of(const ActionProfile& profile) {
  return static_cast<InputKind>(profile.index());
}

std::size_t profile_size(const ActionProfile& profile) {
  return std::visit([](const auto& v) { return v.size(); }, profile);
}

Action action_at(const ActionProfile& profile, std::size_t i) {
  return std::visit([i](const auto& v) -> Action { return v.at(i); }, profile);
}

void set_action(ActionProfile& profile, std::size_t i, const Action& a) {
  if (profile.index() != a.index()) {
    throw InvalidInput("action kind does not match profile kind");
  }
  switch (profile.index()) {
  case 0:
    std::get<Votes>(profile).at(i) = std::get<Vote>(a);
    break;
  case 1:
    std::get<Rankings>(profile).at(i) = std::get<Ranking>(a);
    break;
  default:
    std::get<Locations>(profile).at(i) = std::get<Point>(a);
    break;
  }
}

ActionProfile make_profile(InputKind kind, const std::vector<Action>& actions) {
  ActionProfile profile;
  switch (kind) {
  case InputKind::voting:
    profile = Votes(actions.size());
    break;
  case InputKind::ranking:
    profile = Rankings(actions.size());
    break;
  case InputKind::location:
    profile = Locations(actions.size());
    break;
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    set_action(profile, i, actions[i]);
  }
  return profile;
}

Lottery Lottery::point_mass(std::size_t m, CandidateIndex j) {
  Lottery l{std::vector<double>(m, 0.0)};
  l.probs.at(j) = 1.0;
  return l;
}

Lottery Lottery::uniform(std::size_t m) {
  return Lottery{std::vector<double>(m, 1.0 / static_cast<double>(m))};
}

std::size_t Lottery::point_mass_index() const noexcept {
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] == 1.0) {
      return j;
    }
  }
  return probs.size();
}

void Lottery::validate() const {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -1e-15) || !std::isfinite(p)) {
      throw InvalidInput("lottery entries must be nonnegative and finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidInput("lottery sums to " + std::to_string(sum) + ", not 1");
  }
}

bool Lottery::approx_equal(const Lottery& other, double tol) const {
  if (probs.size() != other.probs.size()) {
    return false;
  }
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (std::abs(probs[j] - other.probs[j]) > tol) {
      return false;
    }
  }
  return true;
}

void validate_profile(const Election& election, const ActionProfile& profile) {
  const std::size_t m = election.m();
  if (profile_size(profile) == 0) {
    throw InvalidInput("empty action profile");
  }
  if (const auto* votes = std::get_if<Votes>(&profile)) {
    for (Vote v : *votes) {
      if (v >= m) {
        throw InvalidInput("vote for unknown candidate " + std::to_string(v));
      }
    }
  } else if (const auto* rankings = std::get_if<Rankings>(&profile)) {
    std::vector<char> seen(m);
    for (const auto& r : *rankings) {
      if (r.size() != m) {
        throw InvalidInput("ranking must list all " + std::to_string(m) + " candidates");
      }
      std::fill(seen.begin(), seen.end(), 0);
      for (CandidateIndex c : r) {
        if (c >= m || seen[c]) {
          throw InvalidInput("ranking is not a permutation of the candidates");
        }
        seen[c] = 1;
      }
    }
  } else {
    for (const auto& p : std::get<Locations>(profile)) {
      election.metric().validate(p);
    }
  }
}

Mechanism::Mechanism(std::string name, InputKind kind, bool randomized, Truthfulness truthfulness,
                     Evaluator evaluator)
    : name_(std::move(name)), kind_(kind), randomized_(randomized), truthfulness_(truthfulness),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))) {}

Lottery Mechanism::operator()(const Election& election, const ActionProfile& profile) const {
  if (kind_of(profile) != kind_) {
    throw InvalidInput("mechanism '" + name_ + "' expects " + to_string(kind_) + " input, got " +
                       to_string(kind_of(profile)));
  }
  validate_profile(election, profile);
  Lottery out = (*evaluator_)(election, profile);
  if (out.m() != election.m()) {
    throw InvalidInput("mechanism '" + name_ + "' returned a lottery of the wrong size");
  }
  out.validate();
  return out;
}

} // namespace spikelab
