#pragma once
// Seeded generators and brute-force oracles shared by the unit tests. The
// oracles are written from the definitions, independently of src/.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "spikelab/geometry.hpp"
#include "spikelab/mechanism.hpp"
#include "spikelab/rng.hpp"

namespace testsupport {

using spikelab::Instance;
using spikelab::SplitMix64;

/// Random line instance: m distinct candidates and n agents, coordinates in
/// [lo, hi]. With `lattice` set, everything lies on the half-integers, so
/// border agents are common.
inline Instance random_line(SplitMix64& rng, std::size_t n_max, std::size_t m_max, bool lattice = false,
                            double lo = -10.0, double hi = 10.0) {
  auto draw = [&] {
    const double v = rng.uniform(lo, hi);
    return lattice ? std::round(v * 2.0) / 2.0 : v;
  };
  const auto m = static_cast<std::size_t>(rng.between(1, m_max));
  std::vector<double> ys;
  while (ys.size() < m) {
    const double y = lattice ? std::round(rng.uniform(lo, hi)) : draw();
    if (std::find(ys.begin(), ys.end(), y) == ys.end()) {
      ys.push_back(y);
    }
  }
  std::sort(ys.begin(), ys.end());
  std::vector<double> xs(rng.between(1, n_max));
  for (auto& x : xs) {
    x = draw();
  }
  return Instance::on_line(ys, xs);
}

inline std::vector<double> random_weights(SplitMix64& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) {
    v = rng.uniform();
    total += v;
  }
  for (auto& v : p) {
    v /= total;
  }
  return p;
}

inline std::vector<std::size_t> random_votes(SplitMix64& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> v(n);
  for (auto& a : v) {
    a = rng.between(0, m - 1);
  }
  return v;
}

/// Spike CDF straight from the definition.
inline double cdf(double t, double n) { return 2.0 * t <= n ? t / (2.0 * (n - t)) : 1.5 - n / (2.0 * t); }

/// Spike lottery from vote counts per candidate (candidates in line order).
inline std::vector<double> spike_oracle(const std::vector<std::size_t>& counts) {
  double n = 0.0;
  for (auto c : counts) {
    n += static_cast<double>(c);
  }
  std::vector<double> p;
  double cum = 0.0;
  for (auto c : counts) {
    const double next = cum + static_cast<double>(c);
    p.push_back(cdf(next, n) - cdf(cum, n));
    cum = next;
  }
  return p;
}

/// The k-th smallest vote (1-based) by candidate index, which is line order.
inline std::size_t percentile_oracle(std::vector<std::size_t> votes, std::size_t k) {
  std::sort(votes.begin(), votes.end());
  return votes[k - 1];
}

/// Sum of |y_j - x_i| on the line.
inline double line_cost(const std::vector<double>& xs, double y) {
  double s = 0.0;
  for (double x : xs) {
    s += std::abs(x - y);
  }
  return s;
}

inline std::vector<double> xs_of(const Instance& inst) {
  std::vector<double> xs;
  for (const auto& p : inst.agents()) {
    xs.push_back(p.x());
  }
  return xs;
}

} // namespace testsupport
