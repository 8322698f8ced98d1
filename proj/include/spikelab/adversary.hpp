#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/evaluation.hpp"
#include "spikelab/mechanism.hpp"
#include "spikelab/truthfulness.hpp"

namespace spikelab {

struct InstancePair {
  Instance x;
  Instance x_prime;
};

/// Candidates (-1, 1); x = (-1, eps), x' = (-eps, 1). Both share the truthful
/// vote profile (C1, C2). Requires 0 < eps < 1.
InstancePair gap_instance(double eps);

/// Candidates (-1, 1); n-1 agents at -1 and one agent at eps.
Instance rd_worst_instance(std::size_t n, double eps);
/// (3 - 2/n + 2eps/n + eps) / (1 + eps), the ratio as printed for this instance.
double rd_worst_ratio_formula(std::size_t n, double eps);

/// Vertices of a unit-edge regular simplex in R^d (d+1 points).
std::vector<Point> regular_simplex(std::size_t d);
/// Unit-edge equilateral triangle in R^2.
std::vector<Point> equilateral_triangle();

struct BoundReport {
  std::string kind; // "simplex", "triangle", "search", "instance"
  std::string mechanism;
  double claimed_bound = 0.0;
  double achieved = 0.0;      // the bound the procedure certifies
  double witness_ratio = 0.0; // direct SC(M)/SC(OPT) on the witness
  std::optional<Instance> witness;
  std::optional<ActionProfile> witness_profile;
  std::vector<ActionProfile> chain;   // profiles queried, in order
  std::vector<double> chain_probability; // probability of the key candidate per chain profile
  CandidateIndex key_candidate = 0;
  std::size_t samples = 0;
  std::size_t probes = 0;
  std::size_t skipped = 0;
};

/// Queries M on the proof's chain a -> a' over the regular simplex with d+1
/// agents and reports 2d p_s(a') + 1, where s is a max-probability candidate
/// on a (highest index on ties).
BoundReport simplex_audit(const Mechanism& voting_mech, std::size_t d);

/// Runs a -> a' -> a'' over the equilateral triangle and reports
/// 1 + 4 p_{r3}(a''), where r3 is a max-probability candidate on a.
BoundReport triangle_audit(const Mechanism& ranking_mech);

/// Re-derives `achieved` from the recorded chain (simplex, triangle) or from
/// the witness (search, instance) by querying M again.
double replay_bound(const Mechanism& mech, const BoundReport& report);

/// max(1 + 2p - p eps, 3 - 2p + 2p eps - eps).
double nonstrategic_pair_bound(double p, double eps);
/// max of the two ratios on the gap pair when C1 is elected with probability p,
/// evaluated directly: max(p(1+eps) + (1-p)(3-eps), p(3-eps) + (1-p)(1+eps)) / (1+eps).
double nonstrategic_pair_ratio(double p, double eps);

struct GridMinimum {
  double p = 0.0;
  double value = 0.0;
};

/// Minimum over p in {0, step, 2 step, ..., 1}; first minimizer on ties.
GridMinimum minimize_on_grid(double (*f)(double, double), double eps, double step);

struct SearchConfig {
  std::size_t n_min = 1, n_max = 16;
  std::size_t m_min = 1, m_max = 6;
  double coord_lo = -10.0, coord_hi = 10.0;
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  MetricKind metric = MetricKind::line;
  std::size_t dim = 2;             // Euclidean dimension
  std::size_t max_points = 8;      // explicit metrics
  bool compression_probes = true;  // line voting mechanisms only
  bool gap_probes = false;         // line only
  std::size_t workers = 1;

  /// Throws InvalidInput on empty ranges or count == 0.
  void validate() const;
};

/// Random instance number `index` of the configuration.
Instance sample_instance(const SearchConfig& cfg, std::size_t index);

/// Random explicit metric on k points: uniform weights in (0, 1] repaired to
/// shortest-path distances.
MetricSpace random_explicit_metric(std::size_t k, std::uint64_t seed);

/// The first cfg.count sampled instances as a family.
InstanceFamily sampled_family(const SearchConfig& cfg);

/// Seeded line instances with integer candidates in [-6, 6] and agents on the
/// half-integers, so that many agents sit on borders. n in 1..n_max, m in
/// m_min..m_max (m_max <= 13).
InstanceFamily lattice_line_family(std::uint64_t seed, std::size_t count, std::size_t n_max,
                                   std::size_t m_min, std::size_t m_max);

/// Max approximation ratio over the samples and their probes. Samples are
/// seeded by (seed, index) and merged by max with the lowest index winning
/// ties, so the result does not depend on the worker count.
BoundReport ratio_search(const Mechanism& mech, const SearchConfig& cfg);

} // namespace spikelab
