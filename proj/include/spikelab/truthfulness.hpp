#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spikelab/mechanisms.hpp"

namespace spikelab {

/// Absolute slack on cost comparisons.
inline constexpr double kStrictMargin = 1e-9;
/// Violations kept verbatim in a report; the rest are only counted.
inline constexpr std::size_t kStoredViolations = 16;

/// Deviations considered per agent. Votes and rankings are exhaustive; locations
/// use a grid over a box.
struct DeviationSpace {
  double grid_step = 0.05;
  double box_margin = 2.0;                 // box = candidate hull inflated by this
  std::optional<double> box_lo, box_hi;    // explicit box, overrides the margin
  std::size_t max_size = 1'000'000;
};

/// All deviations of one agent. Throws SpaceOverflow above space.max_size.
std::vector<Action> deviation_actions(const Election& election, InputKind kind,
                                      const DeviationSpace& space);
std::string describe(const DeviationSpace& space, InputKind kind);

struct Violation {
  Instance instance;
  std::vector<std::size_t> agents; // coalition, 0-based
  ActionProfile truthful;
  ActionProfile deviated;
  std::vector<double> cost_before; // per coalition member
  std::vector<double> cost_after;
};

struct AuditReport {
  bool passed = true;
  std::size_t instances = 0;
  std::size_t comparisons = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations; // first kStoredViolations
  std::string search_space;

  void record(Violation v);
  /// Appends other's counts and violations; keeps this report's description.
  void merge(const AuditReport& other);
};

/// A lazily generated family of instances.
struct InstanceFamily {
  std::size_t size = 0;
  std::function<Instance(std::size_t)> at;
  std::string description;
};

/// Every line instance with exactly n agents and 1..max_m candidates, all
/// coordinates drawn from grid (candidates strictly increasing, agents any
/// sequence).
InstanceFamily grid_line_family(const std::vector<double>& grid, std::size_t n, std::size_t max_m);
InstanceFamily single_instance_family(const Instance& inst);

/// Expected distance from the agent's true location under M(profile).
double agent_cost(const Mechanism& mech, const Instance& inst, const ActionProfile& profile,
                  std::size_t agent);

/// For every truthful profile, agent and deviation: cost(true) <= cost(dev) + margin.
AuditReport audit_unilateral(const Mechanism& mech, const Instance& inst,
                             const DeviationSpace& space = {});
/// Same audit over a family. Instances are split into contiguous chunks, one
/// per worker, and merged in order, so the report does not depend on workers.
AuditReport audit_unilateral(const Mechanism& mech, const InstanceFamily& family,
                             const DeviationSpace& space = {}, std::size_t workers = 1);

/// Audits each percentile point mass with positive weight as a deterministic
/// mechanism on the instances of the family (which must all have w.n() agents).
AuditReport audit_universal_wpv(const WpvWeights& w, const InstanceFamily& family,
                                std::size_t workers = 1);

/// Batch form: each distinct (n, k) percentile mechanism is audited once and
/// its report shared by every weight vector that uses it. families[n] must
/// hold the instances with n agents.
std::vector<AuditReport> audit_universal_wpv(const std::vector<WpvWeights>& weights,
                                             const std::function<InstanceFamily(std::size_t)>& family_for_n,
                                             std::size_t workers = 1);

/// Coalitions of size 1..max_coalition, joint vote deviations; a violation
/// needs every member to gain strictly. Voting mechanisms and n <= 6 only.
AuditReport audit_gsp(const Mechanism& mech, const Instance& inst, std::size_t max_coalition);

struct ProbeResult {
  Action first;
  Action second;
  double cost_first = 0.0;
  double cost_second = 0.0;

  bool equal(double tol = kStrictMargin) const;
};

/// Agent's expected cost under two truthful actions, others fixed at their
/// first truthful action. Voting and ranking mechanisms need an agent with at
/// least two true actions. Location mechanisms compare the one-sided reports
/// x - h and x + h.
ProbeResult border_equal_probe(const Mechanism& mech, const Instance& inst, std::size_t agent,
                               double h = 1e-7);

/// Re-evaluates a violation; true when every member still gains by more than
/// the margin.
bool replay(const Mechanism& mech, const Violation& v);

} // namespace spikelab
