#include "spikelab/mechanisms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "spikelab/error.hpp"
#include "spikelab/format.hpp"

namespace spikelab {

double spike_cdf(std::int64_t t, std::int64_t n) {
  if (n < 1 || t < 0 || t > n) {
    throw InvalidInput("spike_cdf needs 0 <= t <= n and n >= 1 (t=" + std::to_string(t) +
                       ", n=" + std::to_string(n) + ")");
  }
  const auto td = static_cast<double>(t);
  const auto nd = static_cast<double>(n);
  if (2 * t <= n) {
    return td / (2.0 * (nd - td));
  }
  return 1.5 - nd / (2.0 * td);
}

WpvWeights::WpvWeights(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) {
    throw InvalidInput("WPV weights need at least one entry");
  }
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput("WPV weights must be nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidInput("WPV weights must sum to 1");
  }
}

WpvWeights WpvWeights::uniform(std::size_t n) {
  return WpvWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

WpvWeights WpvWeights::point_mass(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw InvalidInput("percentile index out of range");
  }
  std::vector<double> p(n, 0.0);
  p[k - 1] = 1.0;
  return WpvWeights(std::move(p));
}

WpvWeights WpvWeights::spike(std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  std::vector<double> p(n);
  for (std::int64_t k = 1; k <= nn; ++k) {
    p[static_cast<std::size_t>(k - 1)] = spike_cdf(k, nn) - spike_cdf(k - 1, nn);
  }
  return WpvWeights(std::move(p));
}

namespace {

const Votes& votes_of(const ActionProfile& profile) { return std::get<Votes>(profile); }

std::vector<std::size_t> vote_counts(const Election& election, const Votes& votes) {
  std::vector<std::size_t> counts(election.m(), 0);
  for (Vote v : votes) {
    counts.at(v) += 1;
  }
  return counts;
}

void require_line(const Election& election, const char* what) {
  if (!election.on_line_metric()) {
    throw InvalidInput(std::string(what) + " is defined on the line only");
  }
}

} // namespace

Votes sorted_by_location(const Election& election, const Votes& votes) {
  require_line(election, "percentile ordering");
  // Line candidates are strictly increasing, so location order is index order.
  Votes out = votes;
  std::stable_sort(out.begin(), out.end());
  return out;
}

Lottery spike_lottery(const Election& election, const Votes& votes) {
  require_line(election, "spike");
  if (votes.empty()) {
    throw InvalidInput("spike needs a nonempty vote profile");
  }
  const auto counts = vote_counts(election, votes);
  const auto n = static_cast<std::int64_t>(votes.size());
  Lottery out{std::vector<double>(election.m(), 0.0)};
  std::int64_t t = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    t += static_cast<std::int64_t>(counts[j]);
    const double f = spike_cdf(t, n);
    out.probs[j] = f - prev;
    prev = f;
  }
  return out;
}

Lottery wpv_lottery(const Election& election, const WpvWeights& w, const Votes& votes) {
  require_line(election, "WPV");
  if (w.n() != votes.size()) {
    throw InvalidInput("WPV weights have length " + std::to_string(w.n()) + " but " +
                       std::to_string(votes.size()) + " votes were cast");
  }
  const auto counts = vote_counts(election, votes);
  Lottery out{std::vector<double>(election.m(), 0.0)};
  std::size_t k = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    for (std::size_t c = 0; c < counts[j]; ++c, ++k) {
      out.probs[j] += w[k];
    }
  }
  return out;
}

Lottery random_dictator_lottery(const Election& election, const Votes& votes) {
  if (votes.empty()) {
    throw InvalidInput("random dictator needs a nonempty vote profile");
  }
  const auto counts = vote_counts(election, votes);
  Lottery out{std::vector<double>(election.m(), 0.0)};
  const auto n = static_cast<double>(votes.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    out.probs[j] = static_cast<double>(counts[j]) / n;
  }
  return out;
}

CandidateIndex percentile_vote(const Election& election, const Votes& votes, std::size_t k) {
  require_line(election, "percentile");
  if (k < 1 || k > votes.size()) {
    throw InvalidInput("percentile " + std::to_string(k) + " out of range for " +
                       std::to_string(votes.size()) + " votes");
  }
  const auto counts = vote_counts(election, votes);
  std::size_t seen = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    seen += counts[j];
    if (seen >= k) {
      return j;
    }
  }
  return counts.size() - 1;
}

Mechanism spike() {
  return Mechanism("spike", InputKind::voting, true, Truthfulness::universal,
                   [](const Election& e, const ActionProfile& a) {
                     return spike_lottery(e, votes_of(a));
                   });
}

Mechanism wpv(WpvWeights weights) {
  std::string name = "wpv:";
  for (std::size_t k = 0; k < weights.n(); ++k) {
    name += (k ? "," : "") + format_number(weights[k]);
  }
  return Mechanism(std::move(name), InputKind::voting, true, Truthfulness::universal,
                   [w = std::move(weights)](const Election& e, const ActionProfile& a) {
                     return wpv_lottery(e, w, votes_of(a));
                   });
}

Mechanism percentile(std::size_t k) {
  if (k < 1) {
    throw InvalidInput("percentile index starts at 1");
  }
  return Mechanism("percentile:" + std::to_string(k), InputKind::voting, false,
                   Truthfulness::deterministic, [k](const Election& e, const ActionProfile& a) {
                     return Lottery::point_mass(e.m(), percentile_vote(e, votes_of(a), k));
                   });
}

Mechanism median() {
  return Mechanism("median", InputKind::voting, false, Truthfulness::deterministic,
                   [](const Election& e, const ActionProfile& a) {
                     const auto& v = votes_of(a);
                     if (v.empty()) {
                       throw InvalidInput("median needs a nonempty vote profile");
                     }
                     return Lottery::point_mass(e.m(), percentile_vote(e, v, (v.size() + 1) / 2));
                   });
}

Mechanism random_dictator() {
  return Mechanism("random-dictator", InputKind::voting, true, Truthfulness::universal,
                   [](const Election& e, const ActionProfile& a) {
                     return random_dictator_lottery(e, votes_of(a));
                   });
}

Mechanism claim1_ranking() {
  return Mechanism(
      "claim1", InputKind::ranking, false, Truthfulness::deterministic,
      [](const Election& e, const ActionProfile& a) {
        const auto& r = std::get<Rankings>(a);
        if (r.size() != 2 || e.m() != 3) {
          throw InvalidInput("claim1 mechanism needs exactly 2 agents and 3 candidates");
        }
        const auto zones = ranking_zones_line(e);
        auto left_zone = [&](const Ranking& ranking) {
          const auto z = zones.zone_of(ranking);
          return z.has_value() && *z <= 1;
        };
        return Lottery::point_mass(3, left_zone(r[0]) && left_zone(r[1]) ? 0 : 2);
      });
}

Mechanism claim4_location() {
  return Mechanism(
      "claim4", InputKind::location, true, Truthfulness::truthful_in_expectation,
      [](const Election& e, const ActionProfile& a) {
        const auto& y = e.line_positions();
        if (y != std::vector<double>{0.0, 3.0, 4.0}) {
          throw InvalidInput("claim4 mechanism needs candidates at (0, 3, 4)");
        }
        const auto& locs = std::get<Locations>(a);
        Lottery out{std::vector<double>(3, 0.0)};
        const double share = 1.0 / static_cast<double>(locs.size());
        for (const auto& p : locs) {
          if (p.x() <= 1.0) {
            out.probs[0] += share / 3.0;
            out.probs[1] += share / 3.0;
            out.probs[2] += share / 3.0;
          } else {
            out.probs[0] += share / 4.0;
            out.probs[1] += share / 2.0;
            out.probs[2] += share / 4.0;
          }
        }
        return out;
      });
}

Mechanism claim5_tie_voting() {
  return Mechanism("claim5", InputKind::voting, true, Truthfulness::truthful_in_expectation,
                   [](const Election& e, const ActionProfile& a) {
                     if (e.m() != 2) {
                       throw InvalidInput("claim5 mechanism needs exactly 2 candidates");
                     }
                     const auto& v = votes_of(a);
                     Lottery out{{0.0, 0.0}};
                     const double share = 1.0 / static_cast<double>(v.size());
                     for (Vote vote : v) {
                       out.probs[vote] += 0.9 * share;
                       out.probs[1 - vote] += 0.1 * share;
                     }
                     return out;
                   });
}

Mechanism uniform_ranking() {
  return Mechanism("uniform-ranking", InputKind::ranking, true, Truthfulness::universal,
                   [](const Election& e, const ActionProfile&) { return Lottery::uniform(e.m()); });
}

Mechanism border_fraction(double share) {
  if (!(share >= 0.0 && share <= 1.0)) {
    throw InvalidInput("border share must lie in [0, 1]");
  }
  return Mechanism("border-fraction:" + format_number(share), InputKind::location, true,
                   Truthfulness::truthful_in_expectation,
                   [share](const Election& e, const ActionProfile& a) {
                     if (e.m() != 2) {
                       throw InvalidInput("border-fraction mechanism needs exactly 2 candidates");
                     }
                     const auto& locs = std::get<Locations>(a);
                     double mass = 0.0;
                     for (const auto& p : locs) {
                       const double d1 = e.distance_to(p, 0);
                       const double d2 = e.distance_to(p, 1);
                       if (distances_tied(d1, d2)) {
                         mass += share;
                       } else if (d1 < d2) {
                         mass += 1.0;
                       }
                     }
                     const double p1 = mass / static_cast<double>(locs.size());
                     return Lottery{{p1, 1.0 - p1}};
                   });
}

Mechanism dictator(std::size_t i) {
  return Mechanism("dictator:" + std::to_string(i + 1), InputKind::voting, false,
                   Truthfulness::deterministic, [i](const Election& e, const ActionProfile& a) {
                     return Lottery::point_mass(e.m(), votes_of(a).at(i));
                   });
}

Mechanism anti_dictator(std::size_t i) {
  return Mechanism("anti-dictator:" + std::to_string(i + 1), InputKind::voting, false,
                   Truthfulness::none, [i](const Election& e, const ActionProfile& a) {
                     if (e.m() != 2) {
                       throw InvalidInput("anti-dictator needs exactly 2 candidates");
                     }
                     return Lottery::point_mass(2, 1 - votes_of(a).at(i));
                   });
}

Mechanism constant(InputKind kind, CandidateIndex j) {
  return Mechanism("constant:" + std::to_string(j + 1), kind, false, Truthfulness::deterministic,
                   [j](const Election& e, const ActionProfile&) {
                     return Lottery::point_mass(e.m(), j);
                   });
}

std::vector<WeightedMechanism> claim5_components(std::size_t n) {
  std::vector<WeightedMechanism> out;
  const double share = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({0.9 * share, dictator(i)});
    out.push_back({0.1 * share, anti_dictator(i)});
  }
  return out;
}

namespace {

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
      throw InvalidInput("bad number '" + s + "'");
    }
    return v;
  } catch (const std::logic_error&) {
    throw InvalidInput("bad number '" + s + "'");
  }
}

std::size_t parse_index(const std::string& s) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw InvalidInput("bad index '" + s + "'");
  }
  return v;
}

} // namespace

Mechanism make_mechanism(const std::string& spec) {
  if (spec == "spike") {
    return spike();
  }
  if (spec == "median") {
    return median();
  }
  if (spec == "random-dictator" || spec == "rd") {
    return random_dictator();
  }
  if (spec == "claim1") {
    return claim1_ranking();
  }
  if (spec == "claim4") {
    return claim4_location();
  }
  if (spec == "claim5") {
    return claim5_tie_voting();
  }
  if (spec == "uniform-ranking") {
    return uniform_ranking();
  }
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string tail = spec.substr(colon + 1);
    if (head == "percentile") {
      return percentile(parse_index(tail));
    }
    if (head == "border-fraction") {
      return border_fraction(parse_double(tail));
    }
    if (head == "wpv") {
      std::vector<double> p;
      std::size_t start = 0;
      while (start <= tail.size()) {
        const auto comma = tail.find(',', start);
        const auto end = comma == std::string::npos ? tail.size() : comma;
        p.push_back(parse_double(tail.substr(start, end - start)));
        start = end + 1;
      }
      return wpv(WpvWeights(std::move(p)));
    }
  }
  throw InvalidInput("unknown mechanism '" + spec + "'");
}

std::vector<std::string> registry_names() {
  return {"spike",  "median", "random-dictator", "percentile:k",    "wpv:<weights>",
          "claim1", "claim4", "claim5",          "uniform-ranking", "border-fraction:s"};
}

} // namespace spikelab
