#include "spikelab/repro.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spikelab/adversary.hpp"
#include "spikelab/compression.hpp"
#include "spikelab/error.hpp"
#include "spikelab/format.hpp"
#include "spikelab/mechanisms.hpp"
#include "spikelab/reductions.hpp"
#include "spikelab/rng.hpp"
#include "spikelab/truthfulness.hpp"

namespace spikelab {

std::string to_string(RowStatus s) {
  switch (s) {
  case RowStatus::pass:
    return "pass";
  case RowStatus::fail:
    return "fail";
  case RowStatus::skipped:
    return "skipped";
  }
  return "unknown";
}

namespace {

constexpr double kTol = 1e-9;

RowStatus status(bool ok) { return ok ? RowStatus::pass : RowStatus::fail; }

std::size_t count_or(const ReproOptions& opts, std::size_t fallback) {
  return opts.samples.value_or(fallback);
}

ClaimRow skipped_row(std::string id, std::string claim, double bound) {
  return {std::move(id), std::move(claim), bound, 0.0, RowStatus::skipped, "no samples"};
}

SearchConfig line_search(const ReproOptions& opts, std::size_t count) {
  SearchConfig cfg;
  cfg.n_min = 1;
  cfg.n_max = 16;
  cfg.m_min = 1;
  cfg.m_max = 6;
  cfg.coord_lo = -10.0;
  cfg.coord_hi = 10.0;
  cfg.count = count;
  cfg.seed = opts.seed;
  cfg.workers = opts.workers;
  return cfg;
}

std::string search_detail(const BoundReport& r, const Mechanism& mech) {
  std::ostringstream os;
  os << "samples=" << r.samples << " probes=" << r.probes << " skipped=" << r.skipped;
  if (r.witness) {
    const double replayed = replay_bound(mech, r);
    os << " witness n=" << r.witness->n() << " m=" << r.witness->m()
       << " replay=" << format_number(replayed);
  }
  return os.str();
}

bool replays(const Mechanism& mech, const BoundReport& r) {
  return !r.witness || std::abs(replay_bound(mech, r) - r.achieved) <= kTol;
}

double pair_ratio(const Mechanism& mech, const InstancePair& pair) {
  return std::max(approximation_ratio(mech, pair.x).ratio, approximation_ratio(mech, pair.x_prime).ratio);
}

// Criterion 1.
std::vector<ClaimRow> spike_upper_bound(const ReproOptions& opts) {
  const std::size_t count = count_or(opts, 100'000);
  if (count == 0) {
    return {skipped_row("1", "spike ratio search on the line", 2.0)};
  }
  const Mechanism s = spike();
  const BoundReport r = ratio_search(s, line_search(opts, count));
  const bool ok = r.achieved <= 2.0 + kTol && replays(s, r);
  return {{"1", "spike ratio search on the line", 2.0, r.achieved, status(ok), search_detail(r, s)}};
}

// Criterion 2.
std::vector<ClaimRow> spike_tightness(const ReproOptions&) {
  const double eps = 1e-3;
  const Mechanism s = spike();
  const auto pair = gap_instance(eps);
  const double rx = approximation_ratio(s, pair.x).ratio;
  const double rxp = approximation_ratio(s, pair.x_prime).ratio;
  const double expected = 2.0 / (1.0 + eps);
  const bool ok = std::abs(rx - expected) <= kTol && std::abs(rxp - expected) <= kTol;
  return {{"2", "spike on the gap pair, eps=1e-3", expected, std::max(rx, rxp), status(ok),
           "x=" + format_number(rx) + " x'=" + format_number(rxp)}};
}

// Criterion 3.
std::vector<ClaimRow> three_candidate(const ReproOptions&) {
  double worst = 0.0;
  std::size_t checked = 0;
  std::size_t equality_cases = 0;
  std::size_t equality_misses = 0;
  std::string first_miss;
  for (int k = -6; k <= 6; ++k) {
    const double beta = std::ldexp(1.0, k);
    for (std::size_t L = 0; L <= 50; ++L) {
      for (std::size_t C = 0; C <= 50; ++C) {
        for (std::size_t R = 0; R <= 50; ++R) {
          if (L + C + R == 0) {
            continue;
          }
          const ThreeCandidateReduction red{L, C, R, beta};
          const double ratio = three_candidate_spike_ratio(red);
          ++checked;
          worst = std::max(worst, ratio);
          const std::size_t med = (red.n() + 1) / 2;
          if (L >= 1 && R >= 1 && L < med && med <= L + C) {
            ++equality_cases;
            if (std::abs(ratio - 2.0) > kTol) {
              if (equality_misses++ == 0) {
                first_miss = "L=" + std::to_string(L) + " C=" + std::to_string(C) + " R=" +
                             std::to_string(R) + " beta=" + format_number(beta) +
                             " ratio=" + format_number(ratio);
              }
            }
          }
        }
      }
    }
  }
  std::vector<ClaimRow> rows;
  rows.push_back({"3a", "three-candidate closed form <= 2", 2.0, worst, status(worst <= 2.0 + kTol),
                  "profiles=" + std::to_string(checked)});
  rows.push_back({"3b", "equality when the median sits at y_C", 2.0,
                  static_cast<double>(equality_cases - equality_misses), status(equality_misses == 0),
                  "cases=" + std::to_string(equality_cases) + " misses=" + std::to_string(equality_misses) +
                      (first_miss.empty() ? "" : " first: " + first_miss)});
  return rows;
}

// Criterion 4.
std::vector<ClaimRow> median_bounds(const ReproOptions& opts) {
  const Mechanism med = median();
  std::vector<ClaimRow> rows;
  const std::size_t count = count_or(opts, 100'000);
  if (count == 0) {
    rows.push_back(skipped_row("4a", "median ratio search on the line", 3.0));
  } else {
    SearchConfig cfg = line_search(opts, count);
    cfg.gap_probes = true;
    const BoundReport r = ratio_search(med, cfg);
    const bool ok = r.achieved <= 3.0 + kTol && r.achieved >= 2.9 && replays(med, r);
    rows.push_back({"4a", "median ratio search on the line (with gap probes)", 3.0, r.achieved, status(ok),
                    search_detail(r, med)});
  }
  const double eps = 1e-3;
  const double expected = (3.0 - eps) / (1.0 + eps);
  const double got = pair_ratio(med, gap_instance(eps));
  rows.push_back({"4b", "median on the gap pair, eps=1e-3", expected, got,
                  status(std::abs(got - expected) <= kTol), ""});
  return rows;
}

// Criterion 5.
std::vector<ClaimRow> random_dictator_bounds(const ReproOptions& opts) {
  const Mechanism rd = random_dictator();
  std::vector<ClaimRow> rows;
  const std::size_t n = 100;
  const double eps = 1e-3;
  const double formula = rd_worst_ratio_formula(n, eps);
  const double got = approximation_ratio(rd, rd_worst_instance(n, eps)).ratio;
  rows.push_back({"5a", "random dictator on the worst instance, n=100 eps=1e-3", formula, got,
                  status(std::abs(got - formula) <= kTol),
                  "difference=" + format_number(got - formula)});
  const std::size_t count = count_or(opts, 10'000);
  if (count == 0) {
    rows.push_back(skipped_row("5b", "random dictator search on explicit metrics", 3.0));
  } else {
    SearchConfig cfg;
    cfg.metric = MetricKind::explicit_matrix;
    cfg.n_min = 1;
    cfg.n_max = 8;
    cfg.m_min = 1;
    cfg.m_max = 8;
    cfg.max_points = 8;
    cfg.count = count;
    cfg.seed = opts.seed;
    cfg.workers = opts.workers;
    const BoundReport r = ratio_search(rd, cfg);
    rows.push_back({"5b", "random dictator search on explicit metrics", 3.0, r.achieved,
                    status(r.achieved <= 3.0 + kTol && replays(rd, r)), search_detail(r, rd)});
  }
  return rows;
}

// Criterion 6.
std::vector<ClaimRow> simplex(const ReproOptions&) {
  const Mechanism rd = random_dictator();
  std::vector<ClaimRow> rows;
  for (std::size_t d = 1; d <= 3; ++d) {
    const BoundReport r = simplex_audit(rd, d);
    const double expected = 3.0 - 2.0 / static_cast<double>(d + 1);
    const double drift = std::abs(r.chain_probability.back() - r.chain_probability.front());
    const bool ok = std::abs(r.achieved - expected) <= 1e-12 && drift <= kTol &&
                    std::abs(replay_bound(rd, r) - r.achieved) <= kTol;
    rows.push_back({"6." + std::to_string(d), "simplex audit of random dictator, d=" + std::to_string(d),
                    expected, r.achieved, status(ok),
                    "border-equal drift=" + format_number(drift) +
                        " witness_ratio=" + format_number(r.witness_ratio)});
  }
  return rows;
}

// Criterion 7.
std::vector<ClaimRow> triangle(const ReproOptions&) {
  const Mechanism u = uniform_ranking();
  const BoundReport r = triangle_audit(u);
  const double expected = 7.0 / 3.0;
  const bool ok = std::abs(r.achieved - expected) <= 1e-12 && std::abs(replay_bound(u, r) - r.achieved) <= kTol;
  return {{"7", "triangle audit of the uniform ranking mechanism", expected, r.achieved, status(ok),
           "witness_ratio=" + format_number(r.witness_ratio)}};
}

// Criterion 8.
std::vector<ClaimRow> nonstrategic(const ReproOptions& opts) {
  const double eps = 1e-2;
  const double expected = 2.0 - eps / 2.0;
  const GridMinimum g = minimize_on_grid(nonstrategic_pair_bound, eps, opts.grid_step);
  const GridMinimum direct = minimize_on_grid(nonstrategic_pair_ratio, eps, opts.grid_step);
  std::vector<ClaimRow> rows;
  rows.push_back({"8a", "non-strategic pair bound minimum, eps=1e-2", expected, g.value,
                  status(std::abs(g.value - expected) <= 1e-6),
                  "direct pair ratio minimum=" + format_number(direct.value) + " at p=" + format_number(direct.p)});
  rows.push_back({"8b", "non-strategic pair bound minimizer", 0.5, g.p, status(std::abs(g.p - 0.5) <= 1e-3 + 1e-12), ""});
  return rows;
}

// Criterion 9.
std::vector<ClaimRow> wpv_universal(const ReproOptions& opts) {
  const std::vector<double> grid{-4, -3, -2, -1, 0, 1, 2, 3, 4};
  std::vector<WpvWeights> weights;
  std::vector<std::string> labels;
  for (std::size_t n = 1; n <= 4; ++n) {
    weights.push_back(WpvWeights::spike(n));
    labels.push_back("spike");
    weights.push_back(WpvWeights::point_mass(n, (n + 1) / 2));
    labels.push_back("median");
    weights.push_back(WpvWeights::uniform(n));
    labels.push_back("random-dictator");
    for (std::size_t k = 0; k < 50; ++k) {
      SplitMix64 rng(derive_seed(opts.seed, 9000 + n * 100 + k));
      std::vector<double> p(n);
      double total = 0.0;
      for (auto& v : p) {
        v = rng.uniform();
        total += v;
      }
      for (auto& v : p) {
        v /= total;
      }
      weights.push_back(WpvWeights(std::move(p)));
      labels.push_back("random");
    }
  }
  const auto reports = audit_universal_wpv(
      weights, [&](std::size_t n) { return grid_line_family(grid, n, 4); }, opts.workers);
  std::size_t violations = 0;
  std::size_t failing = 0;
  std::string first;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    violations += reports[i].violation_count;
    if (!reports[i].passed) {
      if (failing++ == 0) {
        first = labels[i] + " n=" + std::to_string(weights[i].n());
      }
    }
  }
  return {{"9", "WPV universal truthfulness on the 9-point grid, n,m <= 4", 0.0,
           static_cast<double>(violations), status(violations == 0),
           "weight vectors=" + std::to_string(weights.size()) +
               (first.empty() ? "" : " first failing: " + first)}};
}

InstanceFamily fixed_candidates_family(std::vector<double> ys, std::vector<double> grid, std::size_t n,
                                       std::string description) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= grid.size();
  }
  InstanceFamily f;
  f.size = size;
  f.description = std::move(description);
  f.at = [ys = std::move(ys), grid = std::move(grid), n](std::size_t idx) {
    std::vector<double> xs(n);
    for (std::size_t i = n; i-- > 0;) {
      xs[i] = grid[idx % grid.size()];
      idx /= grid.size();
    }
    return Instance::on_line(ys, xs);
  };
  return f;
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t k = 0; k <= count; ++k) {
    out.push_back(lo + static_cast<double>(k) * step);
  }
  return out;
}

// Criterion 10.
std::vector<ClaimRow> counterexamples(const ReproOptions& opts) {
  std::vector<ClaimRow> rows;
  {
    const Mechanism c4 = claim4_location();
    DeviationSpace space;
    space.grid_step = 0.01;
    space.box_lo = -2.0;
    space.box_hi = 6.0;
    AuditReport audit;
    for (std::size_t n = 1; n <= 2; ++n) {
      audit.merge(audit_unilateral(
          c4, fixed_candidates_family({0, 3, 4}, steps(-2, 6, 0.25), n, "claim4 grid"), space, opts.workers));
    }
    const auto witness = find_location_ranking_witness(c4, Instance::on_line({0, 3, 4}, {0.75}), 0, {0.75, 1.25});
    rows.push_back({"10a", "claim4 passes the TIE grid audit", 0.0, static_cast<double>(audit.violation_count),
                    status(audit.passed), "comparisons=" + std::to_string(audit.comparisons)});
    rows.push_back({"10b", "claim4 differs at 0.75 vs 1.25", 1.0, witness ? 1.0 : 0.0, status(witness.has_value()),
                    witness ? "lotteries differ" : "no witness"});
  }
  {
    const Mechanism c1 = claim1_ranking();
    const std::vector<double> ys{0, 2, 3};
    const AuditReport audit =
        audit_unilateral(c1, fixed_candidates_family(ys, steps(-1, 4, 0.25), 2, "claim1 grid"), {}, opts.workers);
    const Election e = Election::on_line(ys);
    const auto zones = ranking_zones_line(e);
    const Ranking& pi1 = zones.zones[0].ranking;
    const Ranking& pi2 = zones.zones[1].ranking;
    const Ranking& pi3 = zones.zones[2].ranking;
    const Lottery a = c1(e, Rankings{pi1, pi2});
    const Lottery b = c1(e, Rankings{pi1, pi3});
    const bool same_top = pi2.front() == pi3.front();
    const bool differ = !a.approx_equal(b, kTol);
    rows.push_back({"10c", "claim1 passes the DSIC audit", 0.0, static_cast<double>(audit.violation_count),
                    status(audit.passed), "comparisons=" + std::to_string(audit.comparisons)});
    rows.push_back({"10d", "claim1 differs on (pi1,pi2) vs (pi1,pi3)", 1.0, differ && same_top ? 1.0 : 0.0,
                    status(differ && same_top), ""});
  }
  {
    const Mechanism c5 = claim5_tie_voting();
    AuditReport tie;
    std::size_t failing_draws = 0;
    std::size_t draws = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto family = fixed_candidates_family({-1, 1}, steps(-2, 2, 0.5), n, "claim5 grid");
      tie.merge(audit_unilateral(c5, family, {}, opts.workers));
      for (const auto& comp : claim5_components(n)) {
        ++draws;
        if (!audit_unilateral(comp.mechanism, family, {}, opts.workers).passed) {
          ++failing_draws;
        }
      }
    }
    rows.push_back({"10e", "claim5 passes the TIE audit", 0.0, static_cast<double>(tie.violation_count),
                    status(tie.passed), ""});
    rows.push_back({"10f", "claim5 realized draws fail DSIC", 1.0, static_cast<double>(failing_draws),
                    status(failing_draws > 0),
                    std::to_string(failing_draws) + " of " + std::to_string(draws) + " draws fail"});
  }
  {
    const AuditReport gsp = audit_gsp(random_dictator(), Instance::on_line({-1, 0, 1}, {-0.51, 0.51}), 2);
    bool exact = false;
    for (const auto& v : gsp.violations) {
      if (v.agents.size() == 2 && std::abs(v.cost_before[0] - 1.0) <= 1e-12 &&
          std::abs(v.cost_before[1] - 1.0) <= 1e-12 && std::abs(v.cost_after[0] - 0.51) <= 1e-12 &&
          std::abs(v.cost_after[1] - 0.51) <= 1e-12) {
        exact = true;
      }
    }
    rows.push_back({"10g", "random dictator GSP violation, costs 1 -> 0.51", 0.51,
                    gsp.violations.empty() ? 1.0 : gsp.violations.front().cost_after.front(), status(exact),
                    "violations=" + std::to_string(gsp.violation_count)});
  }
  return rows;
}

// Criterion 11.
std::vector<ClaimRow> compression_properties(const ReproOptions& opts) {
  const std::size_t count = count_or(opts, 10'000);
  if (count == 0) {
    return {skipped_row("11", "compression properties", 0.0)};
  }
  const SearchConfig cfg = line_search(opts, count);
  const Mechanism s = spike();
  std::size_t opt_changes = 0;
  std::size_t tight_fails = 0;
  std::size_t diff_fails = 0;
  std::size_t outward_fails = 0;
  std::size_t diff_checks = 0;
  std::size_t outward_checks = 0;
  double worst_diff_slack = -INFINITY;
  for (std::size_t i = 0; i < count; ++i) {
    const Instance inst = sample_instance(cfg, i);
    const CandidateIndex opt = optimal_candidate(inst).index;
    const Instance tight = tight_profile(inst, opt);
    if (optimal_candidate(tight).index != opt) {
      ++opt_changes;
    }
    const Votes tv = outward_votes(tight, opt);
    SplitMix64 rng(derive_seed(opts.seed ^ 0x11, i));
    for (std::size_t k = 0; k < 20; ++k) {
      std::vector<double> p(inst.n());
      double total = 0.0;
      for (auto& v : p) {
        v = rng.uniform();
        total += v;
      }
      for (auto& v : p) {
        v /= total;
      }
      const Mechanism w = wpv(WpvWeights(std::move(p)));
      const double before = approximation_ratio(w, inst).ratio;
      const double after = ratio_for_profile(w, tight, tv).ratio;
      if (after < before - kTol) {
        ++tight_fails;
      }
    }
    const CompressionResult cr = compress_fully(inst);
    for (std::size_t k = 0; k + 1 < cr.trace.size(); ++k) {
      const Instance a = cr.trace[k].to_instance(inst.election());
      const Instance b = cr.trace[k + 1].to_instance(inst.election());
      const double sc_a = lottery_social_cost(s(a.election(), outward_votes(a, opt)), a);
      const double sc_b = lottery_social_cost(s(b.election(), outward_votes(b, opt)), b);
      const double delta_opt = candidate_cost(a, opt) - candidate_cost(b, opt);
      const double slack = (sc_a - sc_b) - 2.0 * delta_opt;
      worst_diff_slack = std::max(worst_diff_slack, slack);
      ++diff_checks;
      if (slack > kTol) {
        ++diff_fails;
      }
    }
    const auto base_cost = lottery_social_cost(s(tight.election(), tv), tight);
    for (std::size_t a = 0; a < tight.n(); ++a) {
      const auto favs = favorite_candidates(tight.election(), tight.agent(a));
      if (favs.size() < 2) {
        continue;
      }
      for (CandidateIndex f : favs) {
        if (f == tv[a]) {
          continue;
        }
        Votes inward = tv;
        inward[a] = f;
        ++outward_checks;
        if (lottery_social_cost(s(tight.election(), inward), tight) > base_cost + kTol) {
          ++outward_fails;
        }
      }
    }
  }
  std::vector<ClaimRow> rows;
  const std::string n_str = "instances=" + std::to_string(count);
  rows.push_back({"11a", "tightening keeps the optimal candidate", 0.0, static_cast<double>(opt_changes),
                  status(opt_changes == 0), n_str});
  rows.push_back({"11b", "tightening never lowers the WPV ratio (20 weight vectors)", 0.0,
                  static_cast<double>(tight_fails), status(tight_fails == 0), n_str});
  rows.push_back({"11c", "compression step: SC difference <= 2 dOPT", 0.0,
                  diff_checks == 0 ? 0.0 : worst_diff_slack, status(diff_fails == 0),
                  "steps=" + std::to_string(diff_checks) + " failures=" + std::to_string(diff_fails)});
  rows.push_back({"11d", "border agents voting outward dominate", 0.0, static_cast<double>(outward_fails),
                  status(outward_fails == 0), "checks=" + std::to_string(outward_checks)});
  return rows;
}

// Criterion 12.
std::vector<ClaimRow> reductions(const ReproOptions& opts) {
  const std::size_t count = count_or(opts, 1'000);
  std::vector<ClaimRow> rows;
  if (count == 0) {
    rows.push_back(skipped_row("12a", "lift round trips", 0.0));
    rows.push_back(skipped_row("12b", "location-to-ranking projection", 0.0));
  } else {
    const auto grid = lattice_line_family(opts.seed, count, 6, 1, 4);
    SearchConfig cfg;
    cfg.n_max = 6;
    cfg.m_max = 4;
    cfg.seed = opts.seed;
    cfg.count = count;
    const auto smooth = sampled_family(cfg);
    ReductionReport lifts;
    auto absorb = [](ReductionReport& into, const ReductionReport& r) {
      into.passed = into.passed && r.passed;
      into.instances += r.instances;
      into.profiles += r.profiles;
      into.mismatches += r.mismatches;
      into.inconsistent += r.inconsistent;
      into.max_difference = std::max(into.max_difference, r.max_difference);
      if (into.first_failure.empty()) {
        into.first_failure = r.first_failure;
      }
    };
    for (const Mechanism& m : {median(), spike(), random_dictator()}) {
      const Mechanism to_ranking = lift(m, InputKind::ranking);
      const Mechanism to_location = lift(m, InputKind::location);
      absorb(lifts, check_reduction(to_ranking, m, top_of_ranking(), grid));
      absorb(lifts, check_reduction(to_location, m, favorite_of_location(), grid));
      absorb(lifts, check_reduction(to_location, to_ranking, ranking_of_location(), grid));
    }
    rows.push_back({"12a", "lift round trips (median, spike, random dictator)", 0.0, lifts.max_difference,
                    status(lifts.passed),
                    "profiles=" + std::to_string(lifts.profiles) +
                        (lifts.first_failure.empty() ? "" : " first: " + lifts.first_failure)});

    ReductionReport proj;
    const Mechanism med = lift(median(), InputKind::location);
    absorb(proj, check_reduction(med, project_location_to_ranking(med), tie_breaking_ranking_map(med), grid));
    absorb(proj, check_reduction(med, project_location_to_ranking(med), tie_breaking_ranking_map(med), smooth));
    const Mechanism sp = lift(spike(), InputKind::location);
    absorb(proj, check_reduction(sp, project_location_to_ranking(sp), tie_breaking_ranking_map(sp), smooth));
    rows.push_back({"12b", "location-to-ranking projection of lifted median and spike", 0.0, proj.max_difference,
                    status(proj.passed),
                    "profiles=" + std::to_string(proj.profiles) +
                        (proj.first_failure.empty() ? "" : " first: " + proj.first_failure)});
  }

  std::size_t configs = 0;
  std::size_t bad = 0;
  std::string first;
  const Election e = Election::on_line({-1.0, 1.0});
  for (double share : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Mechanism bf = border_fraction(share);
    for (std::size_t n = 1; n <= 12; ++n) {
      for (std::size_t n1 = 0; n1 <= n; ++n1) {
        for (std::size_t n2 = 0; n1 + n2 <= n; ++n2) {
          const std::size_t n3 = n - n1 - n2;
          const auto mp = two_candidate_mixing(bf, e, n1, n2, n3);
          ++configs;
          if (!(mp.p3 <= mp.p1 + kTol && mp.p1 <= mp.p2 + kTol)) {
            if (bad++ == 0) {
              first = "share=" + format_number(share) + " (" + std::to_string(n1) + "," + std::to_string(n2) +
                      "," + std::to_string(n3) + ")";
            }
          }
        }
      }
    }
  }
  const Mechanism half = border_fraction(0.5);
  const auto two = fixed_candidates_family({-1, 1}, {-2, -1, 0, 1, 2}, 4, "two-candidate grid");
  const ReductionReport mixing =
      check_reduction(half, project_location_to_voting_2cand(half), two_candidate_mixing_map(half), two);
  rows.push_back({"12c", "border-fraction monotonicity p3 <= p1 <= p2, n <= 12", 0.0, static_cast<double>(bad),
                  status(bad == 0), "configurations=" + std::to_string(configs) + (first.empty() ? "" : " first: " + first)});
  rows.push_back({"12d", "q-mixing reduction of border-fraction 0.5", 0.0, mixing.max_difference,
                  status(mixing.passed), mixing.first_failure});
  return rows;
}

} // namespace

std::vector<ClaimRow> run_criterion(int id, const ReproOptions& opts) {
  switch (id) {
  case 1:
    return spike_upper_bound(opts);
  case 2:
    return spike_tightness(opts);
  case 3:
    return three_candidate(opts);
  case 4:
    return median_bounds(opts);
  case 5:
    return random_dictator_bounds(opts);
  case 6:
    return simplex(opts);
  case 7:
    return triangle(opts);
  case 8:
    return nonstrategic(opts);
  case 9:
    return wpv_universal(opts);
  case 10:
    return counterexamples(opts);
  case 11:
    return compression_properties(opts);
  case 12:
    return reductions(opts);
  default:
    throw InvalidInput("no acceptance criterion " + std::to_string(id));
  }
}

ClaimRow spike_cdf_symmetry_row() {
  double worst = 0.0;
  for (std::int64_t n = 1; n <= 1000; ++n) {
    for (std::int64_t t = 0; t <= n; ++t) {
      worst = std::max(worst, std::abs(spike_cdf(t, n) + spike_cdf(n - t, n) - 1.0));
    }
  }
  return {"S", "spike CDF symmetry F(t) + F(n-t) = 1", 0.0, worst, status(worst <= 1e-12), "n <= 1000"};
}

std::vector<ClaimRow> repro_all(const ReproOptions& opts) {
  std::vector<ClaimRow> rows{spike_cdf_symmetry_row()};
  for (int id = 1; id <= kCriterionCount; ++id) {
    for (auto& r : run_criterion(id, opts)) {
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

bool all_passed(const std::vector<ClaimRow>& rows) {
  return std::none_of(rows.begin(), rows.end(), [](const ClaimRow& r) { return r.status == RowStatus::fail; });
}

std::string format_row(const ClaimRow& row) {
  std::string tag = row.status == RowStatus::pass ? "PASS" : row.status == RowStatus::fail ? "FAIL" : "SKIP";
  std::string out = tag + " " + row.id;
  out.append(row.id.size() < 5 ? 5 - row.id.size() : 1, ' ');
  out += row.claim + ": bound=" + format_number(row.bound) + " achieved=" + format_number(row.achieved);
  if (!row.detail.empty()) {
    out += " | " + row.detail;
  }
  return out;
}

std::string claims_csv_header() { return "claim,description,bound,achieved,status,detail"; }

std::string claims_csv_row(const ClaimRow& row) {
  return csv_field(row.id) + "," + csv_field(row.claim) + "," + format_number(row.bound) + "," +
         format_number(row.achieved) + "," + to_string(row.status) + "," + csv_field(row.detail);
}

} // namespace spikelab
