#include "spikelab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "spikelab/compression.hpp"
#include "spikelab/error.hpp"
#include "spikelab/rng.hpp"

namespace spikelab {

InstancePair gap_instance(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidInput("gap instance needs 0 < eps < 1");
  }
  return {Instance::on_line({-1.0, 1.0}, {-1.0, eps}), Instance::on_line({-1.0, 1.0}, {-eps, 1.0})};
}

Instance rd_worst_instance(std::size_t n, double eps) {
  if (n < 2) {
    throw InvalidInput("random dictator instance needs n >= 2");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidInput("random dictator instance needs 0 < eps < 1");
  }
  std::vector<double> xs(n, -1.0);
  xs.back() = eps;
  return Instance::on_line({-1.0, 1.0}, xs);
}

double rd_worst_ratio_formula(std::size_t n, double eps) {
  const auto nd = static_cast<double>(n);
  return (3.0 - 2.0 / nd + 2.0 * eps / nd + eps) / (1.0 + eps);
}

std::vector<Point> regular_simplex(std::size_t d) {
  if (d == 0) {
    throw InvalidInput("simplex dimension must be at least 1");
  }
  const std::size_t k = d + 1;
  // e_i minus the centroid, in R^{d+1}
  std::vector<std::vector<double>> v(k, std::vector<double>(k, -1.0 / static_cast<double>(k)));
  for (std::size_t i = 0; i < k; ++i) {
    v[i][i] += 1.0;
  }
  // Gram-Schmidt on v_1..v_d spans the hyperplane sum = 0.
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> u = v[i];
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        dot += u[c] * b[c];
      }
      for (std::size_t c = 0; c < k; ++c) {
        u[c] -= dot * b[c];
      }
    }
    double norm = 0.0;
    for (double c : u) {
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& c : u) {
      c /= norm;
    }
    basis.push_back(std::move(u));
  }
  const double scale = 1.0 / std::sqrt(2.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> coords(d);
    for (std::size_t j = 0; j < d; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        dot += v[i][c] * basis[j][c];
      }
      coords[j] = dot * scale;
    }
    pts.emplace_back(std::move(coords));
  }
  return pts;
}

std::vector<Point> equilateral_triangle() {
  return {Point({0.0, 0.0}), Point({1.0, 0.0}), Point({0.5, std::sqrt(3.0) / 2.0})};
}

namespace {

CandidateIndex argmax_highest(const Lottery& lot) {
  CandidateIndex best = 0;
  for (std::size_t j = 1; j < lot.m(); ++j) {
    if (lot.probs[j] >= lot.probs[best] - 1e-12) {
      best = j;
    }
  }
  return best;
}

Point midpoint(const Point& a, const Point& b) {
  std::vector<double> c(a.dim());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = (a.coords[k] + b.coords[k]) / 2.0;
  }
  return Point(std::move(c));
}

} // namespace

BoundReport simplex_audit(const Mechanism& voting_mech, std::size_t d) {
  if (voting_mech.input_kind() != InputKind::voting) {
    throw InvalidInput("simplex audit needs a voting mechanism");
  }
  const std::size_t m = d + 1;
  Election election(MetricSpace::euclidean(d), regular_simplex(d));
  BoundReport rep;
  rep.kind = "simplex";
  rep.mechanism = voting_mech.name();
  rep.claimed_bound = 3.0 - 2.0 / static_cast<double>(m);

  Votes a(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = i;
  }
  const Lottery la = voting_mech(election, a);
  const CandidateIndex s = argmax_highest(la);
  const CandidateIndex role1 = s == 0 ? 1 : 0;
  rep.key_candidate = s;
  rep.chain.push_back(a);
  rep.chain_probability.push_back(la.probs[s]);

  Votes cur = a;
  for (std::size_t k = 0; k < m; ++k) {
    if (k == s || k == role1) {
      continue;
    }
    cur[k] = role1;
    rep.chain.push_back(cur);
    rep.chain_probability.push_back(voting_mech(election, cur).probs[s]);
  }
  const double p_final = rep.chain_probability.back();
  rep.achieved = 2.0 * static_cast<double>(d) * p_final + 1.0;

  std::vector<Point> agents(m, election.candidate(role1));
  agents[s] = midpoint(election.candidate(role1), election.candidate(s));
  Instance witness(election, std::move(agents));
  rep.witness_ratio = ratio_for_profile(voting_mech, witness, cur).ratio;
  rep.witness = std::move(witness);
  rep.witness_profile = cur;
  return rep;
}

BoundReport triangle_audit(const Mechanism& ranking_mech) {
  if (ranking_mech.input_kind() != InputKind::ranking) {
    throw InvalidInput("triangle audit needs a ranking mechanism");
  }
  Election election(MetricSpace::euclidean(2), equilateral_triangle());
  BoundReport rep;
  rep.kind = "triangle";
  rep.mechanism = ranking_mech.name();
  rep.claimed_bound = 7.0 / 3.0;

  const Rankings a{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  const Lottery la = ranking_mech(election, a);
  const CandidateIndex r3 = argmax_highest(la);
  const CandidateIndex r1 = (r3 + 1) % 3;
  const CandidateIndex r2 = (r3 + 2) % 3;
  // Role agent k of the proof is the agent whose ranking starts with r_{k+1}.
  const std::size_t agent1 = r1;
  const std::size_t agent2 = r2;
  const std::size_t agent3 = r3;
  rep.key_candidate = r3;
  rep.chain.push_back(a);
  rep.chain_probability.push_back(la.probs[r3]);

  Rankings a1 = a;
  a1[agent1] = {r2, r1, r3};
  rep.chain.push_back(a1);
  rep.chain_probability.push_back(ranking_mech(election, a1).probs[r3]);

  Rankings a2 = a1;
  a2[agent3] = {r3, r2, r1};
  rep.chain.push_back(a2);
  rep.chain_probability.push_back(ranking_mech(election, a2).probs[r3]);
  rep.achieved = 1.0 + 4.0 * rep.chain_probability.back();

  std::vector<Point> agents(3);
  agents[agent1] = election.candidate(r2);
  agents[agent2] = election.candidate(r2);
  agents[agent3] = midpoint(election.candidate(r2), election.candidate(r3));
  Instance witness(election, std::move(agents));
  rep.witness_ratio = ratio_for_profile(ranking_mech, witness, a2).ratio;
  rep.witness = std::move(witness);
  rep.witness_profile = a2;
  return rep;
}

double replay_bound(const Mechanism& mech, const BoundReport& report) {
  if (!report.witness) {
    throw InvalidInput("bound report has no witness to replay");
  }
  const auto& election = report.witness->election();
  if (report.kind == "simplex" || report.kind == "triangle") {
    if (report.chain.empty()) {
      throw InvalidInput("bound report has no chain to replay");
    }
    const double p = mech(election, report.chain.back()).probs.at(report.key_candidate);
    if (report.kind == "simplex") {
      return 2.0 * static_cast<double>(election.m() - 1) * p + 1.0;
    }
    return 1.0 + 4.0 * p;
  }
  if (!report.witness_profile) {
    throw InvalidInput("bound report has no witness profile to replay");
  }
  return ratio_for_profile(mech, *report.witness, *report.witness_profile).ratio;
}

double nonstrategic_pair_bound(double p, double eps) {
  if (!(p >= 0.0 && p <= 1.0) || !(eps > 0.0 && eps < 1.0)) {
    throw InvalidInput("pair bound needs 0 <= p <= 1 and 0 < eps < 1");
  }
  return std::max(1.0 + 2.0 * p - p * eps, 3.0 - 2.0 * p + 2.0 * p * eps - eps);
}

double nonstrategic_pair_ratio(double p, double eps) {
  if (!(p >= 0.0 && p <= 1.0) || !(eps > 0.0 && eps < 1.0)) {
    throw InvalidInput("pair ratio needs 0 <= p <= 1 and 0 < eps < 1");
  }
  const double on_x = p * (1.0 + eps) + (1.0 - p) * (3.0 - eps);
  const double on_x_prime = p * (3.0 - eps) + (1.0 - p) * (1.0 + eps);
  return std::max(on_x, on_x_prime) / (1.0 + eps);
}

GridMinimum minimize_on_grid(double (*f)(double, double), double eps, double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw InvalidInput("grid step must lie in (0, 1]");
  }
  const auto count = static_cast<std::size_t>(std::llround(1.0 / step));
  GridMinimum best{0.0, f(0.0, eps)};
  for (std::size_t k = 1; k <= count; ++k) {
    const double p = std::min(1.0, static_cast<double>(k) / static_cast<double>(count));
    const double v = f(p, eps);
    if (v < best.value) {
      best = {p, v};
    }
  }
  return best;
}

void SearchConfig::validate() const {
  if (n_min < 1 || n_min > n_max) {
    throw InvalidInput("search needs 1 <= n_min <= n_max");
  }
  if (m_min < 1 || m_min > m_max) {
    throw InvalidInput("search needs 1 <= m_min <= m_max");
  }
  if (!(coord_lo < coord_hi) || !std::isfinite(coord_lo) || !std::isfinite(coord_hi)) {
    throw InvalidInput("search needs a nonempty coordinate range");
  }
  if (count < 1) {
    throw InvalidInput("search needs count >= 1");
  }
  if (metric == MetricKind::euclidean && dim < 1) {
    throw InvalidInput("euclidean search needs dim >= 1");
  }
  if (metric == MetricKind::explicit_matrix && (max_points < 2 || m_min > max_points)) {
    throw InvalidInput("explicit search needs max_points >= max(2, m_min)");
  }
}

MetricSpace random_explicit_metric(std::size_t k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      d[i][j] = d[j][i] = 1.0 - rng.uniform(); // (0, 1]
    }
  }
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        d[i][j] = std::min(d[i][j], d[i][l] + d[l][j]);
      }
    }
  }
  return MetricSpace::explicit_matrix(std::move(d));
}

Instance sample_instance(const SearchConfig& cfg, std::size_t index) {
  SplitMix64 rng(derive_seed(cfg.seed, index));
  const auto n = static_cast<std::size_t>(rng.between(cfg.n_min, cfg.n_max));
  switch (cfg.metric) {
  case MetricKind::line: {
    const auto m = static_cast<std::size_t>(rng.between(cfg.m_min, cfg.m_max));
    std::vector<double> ys;
    while (ys.size() < m) {
      const double y = rng.uniform(cfg.coord_lo, cfg.coord_hi);
      if (std::find(ys.begin(), ys.end(), y) == ys.end()) {
        ys.push_back(y);
      }
    }
    std::sort(ys.begin(), ys.end());
    std::vector<double> xs(n);
    for (auto& x : xs) {
      x = rng.uniform(cfg.coord_lo, cfg.coord_hi);
    }
    return Instance::on_line(std::move(ys), std::move(xs));
  }
  case MetricKind::euclidean: {
    const auto m = static_cast<std::size_t>(rng.between(cfg.m_min, cfg.m_max));
    auto draw = [&] {
      std::vector<double> c(cfg.dim);
      for (auto& v : c) {
        v = rng.uniform(cfg.coord_lo, cfg.coord_hi);
      }
      return Point(std::move(c));
    };
    std::vector<Point> ys(m);
    std::vector<Point> xs(n);
    for (auto& y : ys) {
      y = draw();
    }
    for (auto& x : xs) {
      x = draw();
    }
    return Instance(Election(MetricSpace::euclidean(cfg.dim), std::move(ys)), std::move(xs));
  }
  case MetricKind::explicit_matrix: {
    const auto k = static_cast<std::size_t>(rng.between(std::max<std::size_t>(2, cfg.m_min), cfg.max_points));
    const auto m = static_cast<std::size_t>(rng.between(cfg.m_min, std::min(cfg.m_max, k)));
    MetricSpace metric = random_explicit_metric(k, rng.next());
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) {
      order[i] = i;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::swap(order[i], order[i + rng.between(0, k - 1 - i)]);
    }
    std::vector<Point> ys;
    for (std::size_t i = 0; i < m; ++i) {
      ys.push_back(Point::at_index(order[i]));
    }
    std::vector<Point> xs(n);
    for (auto& x : xs) {
      x = Point::at_index(rng.between(0, k - 1));
    }
    return Instance(Election(std::move(metric), std::move(ys)), std::move(xs));
  }
  }
  throw InvalidInput("unknown metric kind");
}

InstanceFamily sampled_family(const SearchConfig& cfg) {
  cfg.validate();
  InstanceFamily f;
  f.size = cfg.count;
  f.description = "seeded " + to_string(cfg.metric) + " instances";
  f.at = [cfg](std::size_t i) { return sample_instance(cfg, i); };
  return f;
}

InstanceFamily lattice_line_family(std::uint64_t seed, std::size_t count, std::size_t n_max,
                                   std::size_t m_min, std::size_t m_max) {
  if (n_max < 1 || m_min < 1 || m_min > m_max || m_max > 13) {
    throw InvalidInput("lattice family needs n_max >= 1 and 1 <= m_min <= m_max <= 13");
  }
  InstanceFamily f;
  f.size = count;
  f.description = "seeded lattice line instances";
  f.at = [=](std::size_t idx) {
    SplitMix64 rng(derive_seed(seed, idx));
    const auto m = static_cast<std::size_t>(rng.between(m_min, m_max));
    std::vector<double> ys;
    while (ys.size() < m) {
      const double y = static_cast<double>(rng.between(0, 12)) - 6.0;
      if (std::find(ys.begin(), ys.end(), y) == ys.end()) {
        ys.push_back(y);
      }
    }
    std::sort(ys.begin(), ys.end());
    std::vector<double> xs(rng.between(1, n_max));
    for (auto& x : xs) {
      x = static_cast<double>(rng.between(0, 24)) / 2.0 - 6.0;
    }
    return Instance::on_line(ys, xs);
  };
  return f;
}

namespace {

struct Candidate {
  double ratio = -1.0;
  std::size_t key = 0; // sample index * 3 + probe
  std::optional<Instance> witness;
  std::optional<ActionProfile> profile;
  std::size_t samples = 0;
  std::size_t probes = 0;
  std::size_t skipped = 0;

  void offer(double r, std::size_t k, const Instance& inst, const ActionProfile& a) {
    if (r > ratio || (r == ratio && k < key)) {
      ratio = r;
      key = k;
      witness = inst;
      profile = a;
    }
  }
  void absorb(Candidate&& other) {
    samples += other.samples;
    probes += other.probes;
    skipped += other.skipped;
    if (other.witness) {
      offer(other.ratio, other.key, *other.witness, *other.profile);
    }
  }
};

} // namespace

BoundReport ratio_search(const Mechanism& mech, const SearchConfig& cfg) {
  cfg.validate();
  const bool probe_compression = cfg.compression_probes && cfg.metric == MetricKind::line &&
                                 mech.input_kind() == InputKind::voting;

  auto run = [&](std::size_t lo, std::size_t hi) {
    Candidate best;
    for (std::size_t i = lo; i < hi; ++i) {
      const Instance inst = sample_instance(cfg, i);
      ++best.samples;
      try {
        const RatioReport r = approximation_ratio(mech, inst);
        best.offer(r.ratio, i * 3, inst, r.witness);
      } catch (const SpaceOverflow&) {
        ++best.skipped;
      }
      if (probe_compression) {
        const CandidateIndex opt = optimal_candidate(inst).index;
        const Instance tight = tight_profile(inst, opt);
        const Votes tv = outward_votes(tight, opt);
        best.offer(ratio_for_profile(mech, tight, tv).ratio, i * 3 + 1, tight, tv);
        const Instance packed = compress_fully(inst).final_instance;
        const Votes pv = outward_votes(packed, opt);
        best.offer(ratio_for_profile(mech, packed, pv).ratio, i * 3 + 2, packed, pv);
        best.probes += 2;
      }
    }
    return best;
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.count));
  std::vector<Candidate> parts(workers);
  if (workers == 1) {
    parts[0] = run(0, cfg.count);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = cfg.count * w / workers;
      const std::size_t hi = cfg.count * (w + 1) / workers;
      threads.emplace_back([&, w, lo, hi] {
        try {
          parts[w] = run(lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) {
      t.join();
    }
    for (auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }
  Candidate best;
  if (cfg.gap_probes) {
    // Gap probes sort after every sample on ties.
    std::size_t key = cfg.count * 3;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const auto pair = gap_instance(eps);
      for (const Instance* inst : {&pair.x, &pair.x_prime}) {
        const RatioReport r = approximation_ratio(mech, *inst);
        best.offer(r.ratio, key++, *inst, r.witness);
        ++best.probes;
      }
    }
  }
  for (auto& p : parts) {
    best.absorb(std::move(p));
  }

  BoundReport rep;
  rep.kind = "search";
  rep.mechanism = mech.name();
  rep.achieved = best.ratio;
  rep.witness_ratio = best.ratio;
  rep.witness = std::move(best.witness);
  rep.witness_profile = std::move(best.profile);
  rep.samples = best.samples;
  rep.probes = best.probes;
  rep.skipped = best.skipped;
  return rep;
}

} // namespace spikelab
