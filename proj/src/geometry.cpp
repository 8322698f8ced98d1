#include "spikelab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spikelab/error.hpp"

namespace spikelab {

bool distances_tied(double a, double b) noexcept {
  return std::abs(a - b) <= kTieTolerance * std::max(1.0, a + b);
}

std::string to_string(MetricKind kind) {
  switch (kind) {
  case MetricKind::line:
    return "line";
  case MetricKind::euclidean:
    return "euclidean";
  case MetricKind::explicit_matrix:
    return "explicit";
  }
  return "unknown";
}

MetricSpace MetricSpace::line() { return MetricSpace(MetricKind::line, 1); }

MetricSpace MetricSpace::euclidean(std::size_t dim) {
  if (dim == 0) {
    throw InvalidInput("euclidean metric needs dimension >= 1");
  }
  return MetricSpace(MetricKind::euclidean, dim);
}

MetricSpace MetricSpace::explicit_matrix(std::vector<std::vector<double>> matrix) {
  const std::size_t k = matrix.size();
  if (k == 0) {
    throw InvalidInput("explicit metric needs at least one point");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i].size() != k) {
      throw InvalidInput("explicit metric matrix must be square");
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double d = matrix[i][j];
      if (!std::isfinite(d) || d < 0.0) {
        throw InvalidInput("explicit metric distances must be finite and nonnegative");
      }
    }
    if (matrix[i][i] != 0.0) {
      throw InvalidInput("explicit metric diagonal must be zero");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(matrix[i][j] - matrix[j][i]) > 1e-9) {
        throw InvalidInput("explicit metric matrix must be symmetric");
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        if (matrix[i][j] > matrix[i][l] + matrix[l][j] + 1e-9) {
          throw InvalidInput("explicit metric violates the triangle inequality at (" +
                             std::to_string(i) + "," + std::to_string(j) + ") via " +
                             std::to_string(l));
        }
      }
    }
  }
  MetricSpace space(MetricKind::explicit_matrix, 1);
  space.matrix_ = std::move(matrix);
  return space;
}

void MetricSpace::validate(const Point& p) const {
  if (p.dim() != dim_) {
    throw InvalidInput("point has " + std::to_string(p.dim()) + " coordinates, metric expects " +
                       std::to_string(dim_));
  }
  for (double c : p.coords) {
    if (!std::isfinite(c)) {
      throw InvalidInput("point coordinates must be finite");
    }
  }
  if (kind_ == MetricKind::explicit_matrix) {
    const double idx = p.coords[0];
    if (idx < 0.0 || idx != std::floor(idx) || idx >= static_cast<double>(matrix_.size())) {
      throw InvalidInput("unknown explicit point index " + std::to_string(idx));
    }
  }
}

double MetricSpace::distance(const Point& p, const Point& q) const {
  if (p.dim() != dim_ || q.dim() != dim_) {
    throw InvalidInput("dimension mismatch in distance");
  }
  switch (kind_) {
  case MetricKind::line:
    return std::abs(p.coords[0] - q.coords[0]);
  case MetricKind::euclidean: {
    double sum = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = p.coords[k] - q.coords[k];
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  case MetricKind::explicit_matrix: {
    const auto i = static_cast<std::size_t>(p.coords[0]);
    const auto j = static_cast<std::size_t>(q.coords[0]);
    if (p.coords[0] < 0.0 || q.coords[0] < 0.0 || i >= matrix_.size() || j >= matrix_.size()) {
      throw InvalidInput("unknown explicit point index");
    }
    return matrix_[i][j];
  }
  }
  return 0.0;
}

double distance(const MetricSpace& metric, const Point& p, const Point& q) {
  return metric.distance(p, q);
}

Election::Election(MetricSpace metric, std::vector<Point> candidates)
    : metric_(std::move(metric)), candidates_(std::move(candidates)) {
  if (candidates_.empty()) {
    throw InvalidInput("an election needs at least one candidate");
  }
  for (const auto& c : candidates_) {
    metric_.validate(c);
  }
  if (metric_.is_line()) {
    line_y_.reserve(candidates_.size());
    for (const auto& c : candidates_) {
      line_y_.push_back(c.x());
    }
    for (std::size_t j = 1; j < line_y_.size(); ++j) {
      if (!(line_y_[j - 1] < line_y_[j])) {
        throw InvalidInput("line candidates must be strictly increasing");
      }
    }
  }
}

Election Election::on_line(std::vector<double> ys) {
  std::vector<Point> pts;
  pts.reserve(ys.size());
  for (double y : ys) {
    pts.push_back(Point::on_line(y));
  }
  return Election(MetricSpace::line(), std::move(pts));
}

const std::vector<double>& Election::line_positions() const {
  if (!metric_.is_line()) {
    throw InvalidInput("operation requires the line metric");
  }
  return line_y_;
}

Instance::Instance(Election election, std::vector<Point> agents)
    : election_(std::move(election)), agents_(std::move(agents)) {
  if (agents_.empty()) {
    throw InvalidInput("an instance needs at least one agent");
  }
  for (const auto& a : agents_) {
    election_.metric().validate(a);
  }
}

Instance Instance::on_line(std::vector<double> ys, std::vector<double> xs) {
  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) {
    pts.push_back(Point::on_line(x));
  }
  return Instance(Election::on_line(std::move(ys)), std::move(pts));
}

std::vector<double> voting_borders(const Election& election) {
  const auto& y = election.line_positions();
  std::vector<double> borders;
  if (y.size() < 2) {
    return borders;
  }
  borders.reserve(y.size() - 1);
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    borders.push_back((y[j] + y[j + 1]) / 2.0);
  }
  return borders;
}

std::vector<CandidateIndex> favorite_candidates(const Election& election, const Point& x) {
  const std::size_t m = election.m();
  std::vector<double> d(m);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    d[j] = election.distance_to(x, j);
    best = std::min(best, d[j]);
  }
  std::vector<CandidateIndex> favs;
  for (std::size_t j = 0; j < m; ++j) {
    if (distances_tied(d[j], best)) {
      favs.push_back(j);
    }
  }
  return favs;
}

std::vector<Ranking> true_rankings(const Election& election, const Point& x) {
  const std::size_t m = election.m();
  std::vector<double> d(m);
  for (std::size_t j = 0; j < m; ++j) {
    d[j] = election.distance_to(x, j);
  }
  std::vector<CandidateIndex> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](CandidateIndex a, CandidateIndex b) { return d[a] < d[b]; });

  // Split the sorted order into classes of mutually tied candidates.
  std::vector<std::vector<CandidateIndex>> classes;
  for (CandidateIndex j : order) {
    if (!classes.empty() && distances_tied(d[classes.back().front()], d[j])) {
      classes.back().push_back(j);
    } else {
      classes.push_back({j});
    }
  }
  for (auto& cls : classes) {
    std::sort(cls.begin(), cls.end());
  }

  std::vector<Ranking> out;
  // Odometer over the permutations of each class; the last class varies fastest,
  // which keeps the output lexicographic.
  std::vector<std::vector<CandidateIndex>> current = classes;
  while (true) {
    Ranking r;
    r.reserve(m);
    for (const auto& cls : current) {
      r.insert(r.end(), cls.begin(), cls.end());
    }
    out.push_back(std::move(r));
    std::size_t k = current.size();
    while (k > 0) {
      --k;
      if (std::next_permutation(current[k].begin(), current[k].end())) {
        break;
      }
      // wrapped to sorted order; carry into the previous class
      if (k == 0) {
        return out;
      }
    }
  }
}

std::optional<std::size_t> ZonePartition::zone_of(const Ranking& r) const {
  for (std::size_t z = 0; z < zones.size(); ++z) {
    if (zones[z].ranking == r) {
      return z;
    }
  }
  return std::nullopt;
}

ZonePartition ranking_zones_line(const Election& election) {
  const auto& y = election.line_positions();
  const std::size_t m = y.size();
  ZonePartition part;
  part.voting_borders = voting_borders(election);

  std::vector<double> borders;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      borders.push_back((y[i] + y[j]) / 2.0);
    }
  }
  std::sort(borders.begin(), borders.end());
  for (double b : borders) {
    if (part.ranking_borders.empty() || !distances_tied(part.ranking_borders.back(), b)) {
      part.ranking_borders.push_back(b);
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& rb = part.ranking_borders;
  auto make_zone = [&](double lo, double hi, double rep) {
    Zone z{lo, hi, rep, {}};
    z.ranking = true_rankings(election, Point::on_line(rep)).front();
    part.zones.push_back(std::move(z));
  };
  if (rb.empty()) {
    make_zone(-inf, inf, y.front());
    return part;
  }
  make_zone(-inf, rb.front(), rb.front() - 1.0);
  for (std::size_t k = 0; k + 1 < rb.size(); ++k) {
    make_zone(rb[k], rb[k + 1], (rb[k] + rb[k + 1]) / 2.0);
  }
  make_zone(rb.back(), inf, rb.back() + 1.0);
  return part;
}

std::vector<Ranking> all_rankings(std::size_t m) {
  Ranking r(m);
  std::iota(r.begin(), r.end(), 0);
  std::vector<Ranking> out;
  do {
    out.push_back(r);
  } while (std::next_permutation(r.begin(), r.end()));
  return out;
}

} // namespace spikelab
