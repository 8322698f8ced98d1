#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace spikelab {

/// Candidate index, 0-based.
using CandidateIndex = std::size_t;

/// A full preference order over candidates, most preferred first.
using Ranking = std::vector<CandidateIndex>;

/// Relative tolerance used to decide that two distances are tied.
inline constexpr double kTieTolerance = 1e-9;

/// |a-b| <= 1e-9 * max(1, a+b). Borders are computed midpoints, so exact
/// comparison would miss genuine ties.
bool distances_tied(double a, double b) noexcept;

/// A location. On the line and in Euclidean space these are coordinates; in an
/// explicit metric the single coordinate holds the index of a named point.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  static Point on_line(double x) { return Point({x}); }
  static Point at_index(std::size_t i) { return Point({static_cast<double>(i)}); }

  std::size_t dim() const noexcept { return coords.size(); }
  double x() const { return coords.at(0); }

  friend bool operator==(const Point&, const Point&) = default;
};

enum class MetricKind { line, euclidean, explicit_matrix };

std::string to_string(MetricKind kind);

class MetricSpace {
public:
  static MetricSpace line();
  static MetricSpace euclidean(std::size_t dim);
  /// Validates zero diagonal, symmetry, nonnegativity and the triangle
  /// inequality (1e-9 slack).
  static MetricSpace explicit_matrix(std::vector<std::vector<double>> matrix);

  MetricKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  bool is_line() const noexcept { return kind_ == MetricKind::line; }
  /// Number of named points of an explicit metric.
  std::size_t point_count() const noexcept { return matrix_.size(); }
  const std::vector<std::vector<double>>& matrix() const noexcept { return matrix_; }

  /// Throws InvalidInput when p does not belong to this space.
  void validate(const Point& p) const;
  double distance(const Point& p, const Point& q) const;

private:
  MetricSpace(MetricKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  MetricKind kind_ = MetricKind::line;
  std::size_t dim_ = 1;
  std::vector<std::vector<double>> matrix_;
};

/// The public part of an election: the metric and the candidate locations.
/// On the line candidates must be strictly increasing.
class Election {
public:
  Election(MetricSpace metric, std::vector<Point> candidates);

  static Election on_line(std::vector<double> ys);

  const MetricSpace& metric() const noexcept { return metric_; }
  const std::vector<Point>& candidates() const noexcept { return candidates_; }
  const Point& candidate(CandidateIndex j) const { return candidates_.at(j); }
  std::size_t m() const noexcept { return candidates_.size(); }
  bool on_line_metric() const noexcept { return metric_.is_line(); }

  /// Candidate coordinates on the line; throws InvalidInput off the line.
  const std::vector<double>& line_positions() const;
  double y(CandidateIndex j) const { return line_positions().at(j); }

  double distance_to(const Point& p, CandidateIndex j) const {
    return metric_.distance(p, candidates_[j]);
  }

private:
  MetricSpace metric_;
  std::vector<Point> candidates_;
  std::vector<double> line_y_;
};

/// Candidates plus the agents' true locations.
class Instance {
public:
  Instance(Election election, std::vector<Point> agents);

  static Instance on_line(std::vector<double> ys, std::vector<double> xs);

  const Election& election() const noexcept { return election_; }
  const MetricSpace& metric() const noexcept { return election_.metric(); }
  const std::vector<Point>& agents() const noexcept { return agents_; }
  const Point& agent(std::size_t i) const { return agents_.at(i); }
  std::size_t n() const noexcept { return agents_.size(); }
  std::size_t m() const noexcept { return election_.m(); }

  /// Same candidates, different agent locations.
  Instance with_agents(std::vector<Point> agents) const { return Instance(election_, std::move(agents)); }

private:
  Election election_;
  std::vector<Point> agents_;
};

double distance(const MetricSpace& metric, const Point& p, const Point& q);

/// Midpoints of consecutive candidates; empty when m < 2.
std::vector<double> voting_borders(const Election& election);

/// All candidates at minimal distance from x, ascending index.
std::vector<CandidateIndex> favorite_candidates(const Election& election, const Point& x);

/// Every ranking that sorts candidates by nondecreasing distance from x.
/// Rankings are produced in lexicographic order of candidate index.
std::vector<Ranking> true_rankings(const Election& election, const Point& x);

struct Zone {
  double lower = 0.0;          // -inf for the leftmost zone
  double upper = 0.0;          // +inf for the rightmost zone
  double representative = 0.0; // strictly inside (lower, upper)
  Ranking ranking;             // the single true ranking of interior points
};

struct ZonePartition {
  std::vector<double> voting_borders;
  std::vector<double> ranking_borders; // distinct b_{i,j}, ascending
  std::vector<Zone> zones;             // left to right

  /// Index of the zone whose interior ranking equals r.
  std::optional<std::size_t> zone_of(const Ranking& r) const;
};

/// Ranking zones of a line election. Bounded zones use their midpoint as
/// representative, the two unbounded zones sit one unit beyond the nearest border.
ZonePartition ranking_zones_line(const Election& election);

/// All m! permutations of 0..m-1 in lexicographic order.
std::vector<Ranking> all_rankings(std::size_t m);

} // namespace spikelab
