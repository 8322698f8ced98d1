#include "spikelab/truthfulness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "spikelab/error.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/format.hpp"

namespace spikelab {

namespace {

std::vector<double> grid_axis(double lo, double hi, double step) {
  std::vector<double> axis;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  axis.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    axis.push_back(lo + static_cast<double>(k) * step);
  }
  return axis;
}

std::size_t factorial_capped(std::size_t m, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    f *= k;
    if (f > cap) {
      return cap + 1;
    }
  }
  return f;
}

} // namespace

std::vector<Action> deviation_actions(const Election& election, InputKind kind,
                                      const DeviationSpace& space) {
  std::vector<Action> out;
  const std::size_t m = election.m();
  switch (kind) {
  case InputKind::voting:
    for (std::size_t j = 0; j < m; ++j) {
      out.emplace_back(Vote{j});
    }
    return out;
  case InputKind::ranking:
    if (factorial_capped(m, space.max_size) > space.max_size) {
      throw SpaceOverflow("ranking deviation space m! exceeds " + std::to_string(space.max_size));
    }
    for (auto& r : all_rankings(m)) {
      out.emplace_back(std::move(r));
    }
    return out;
  case InputKind::location:
    break;
  }

  const auto& metric = election.metric();
  if (metric.kind() == MetricKind::explicit_matrix) {
    for (std::size_t k = 0; k < metric.point_count(); ++k) {
      out.emplace_back(Point::at_index(k));
    }
    return out;
  }
  if (!(space.grid_step > 0.0)) {
    throw InvalidInput("grid step must be positive");
  }
  const std::size_t d = metric.dim();
  std::vector<std::vector<double>> axes(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    double lo = election.candidate(0).coords[k];
    double hi = lo;
    for (const auto& c : election.candidates()) {
      lo = std::min(lo, c.coords[k]);
      hi = std::max(hi, c.coords[k]);
    }
    lo = space.box_lo.value_or(lo - space.box_margin);
    hi = space.box_hi.value_or(hi + space.box_margin);
    if (!(hi >= lo)) {
      throw InvalidInput("empty deviation box");
    }
    const double count = std::floor((hi - lo) / space.grid_step + 1e-9) + 1.0;
    if (count * static_cast<double>(total) > static_cast<double>(space.max_size)) {
      throw SpaceOverflow("location deviation grid exceeds " + std::to_string(space.max_size) +
                          " points");
    }
    axes[k] = grid_axis(lo, hi, space.grid_step);
    total *= axes[k].size();
  }
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) {
      c[k] = axes[k][idx[k]];
    }
    out.emplace_back(Point(std::move(c)));
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < axes[k].size()) {
        break;
      }
      idx[k] = 0;
    }
  }
  return out;
}

std::string describe(const DeviationSpace& space, InputKind kind) {
  switch (kind) {
  case InputKind::voting:
    return "all candidates";
  case InputKind::ranking:
    return "all rankings";
  case InputKind::location:
    break;
  }
  std::string box = space.box_lo && space.box_hi
                        ? "[" + format_number(*space.box_lo) + "," + format_number(*space.box_hi) + "]"
                        : "candidate hull +/- " + format_number(space.box_margin);
  return "location grid step " + format_number(space.grid_step) + " over " + box;
}

void AuditReport::record(Violation v) {
  passed = false;
  ++violation_count;
  if (violations.size() < kStoredViolations) {
    violations.push_back(std::move(v));
  }
}

void AuditReport::merge(const AuditReport& other) {
  passed = passed && other.passed;
  instances += other.instances;
  comparisons += other.comparisons;
  violation_count += other.violation_count;
  for (const auto& v : other.violations) {
    if (violations.size() >= kStoredViolations) {
      break;
    }
    violations.push_back(v);
  }
  if (search_space.empty()) {
    search_space = other.search_space;
  }
}

InstanceFamily grid_line_family(const std::vector<double>& grid, std::size_t n, std::size_t max_m) {
  if (grid.empty() || n == 0 || max_m == 0) {
    throw InvalidInput("grid family needs a nonempty grid, n >= 1 and max_m >= 1");
  }
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t g = sorted.size();

  auto subsets = std::make_shared<std::vector<std::vector<double>>>();
  for (std::size_t m = 1; m <= std::min(max_m, g); ++m) {
    std::vector<std::size_t> pick(m);
    for (std::size_t k = 0; k < m; ++k) {
      pick[k] = k;
    }
    while (true) {
      std::vector<double> ys;
      for (auto k : pick) {
        ys.push_back(sorted[k]);
      }
      subsets->push_back(std::move(ys));
      std::size_t k = m;
      while (k > 0 && pick[k - 1] == g - m + (k - 1)) {
        --k;
      }
      if (k == 0) {
        break;
      }
      ++pick[k - 1];
      for (std::size_t l = k; l < m; ++l) {
        pick[l] = pick[l - 1] + 1;
      }
    }
  }
  std::size_t per = 1;
  for (std::size_t k = 0; k < n; ++k) {
    per *= g;
  }
  InstanceFamily fam;
  fam.size = subsets->size() * per;
  fam.description = "line grid of " + std::to_string(g) + " points, n=" + std::to_string(n) +
                    ", m<=" + std::to_string(max_m);
  fam.at = [subsets, sorted, per, n, g](std::size_t i) {
    const auto& ys = (*subsets)[i / per];
    std::size_t rest = i % per;
    std::vector<double> xs(n);
    for (std::size_t k = n; k-- > 0;) {
      xs[k] = sorted[rest % g];
      rest /= g;
    }
    return Instance::on_line(ys, std::move(xs));
  };
  return fam;
}

InstanceFamily single_instance_family(const Instance& inst) {
  return InstanceFamily{1, [inst](std::size_t) { return inst; }, "single instance"};
}

double agent_cost(const Mechanism& mech, const Instance& inst, const ActionProfile& profile,
                  std::size_t agent) {
  return agent_expected_cost(inst.election(), mech(inst.election(), profile), inst.agent(agent));
}

AuditReport audit_unilateral(const Mechanism& mech, const Instance& inst, const DeviationSpace& space) {
  AuditReport report;
  report.instances = 1;
  report.search_space = describe(space, mech.input_kind());
  const auto& election = inst.election();
  const auto devs = deviation_actions(election, mech.input_kind(), space);
  for_each_truthful_profile(inst, mech.input_kind(), [&](const ActionProfile& a) {
    const Lottery base = mech(election, a);
    ActionProfile dev = a;
    for (std::size_t i = 0; i < inst.n(); ++i) {
      const Action own = action_at(a, i);
      const double before = agent_expected_cost(election, base, inst.agent(i));
      for (const auto& d : devs) {
        if (d == own) {
          continue;
        }
        set_action(dev, i, d);
        const double after = agent_expected_cost(election, mech(election, dev), inst.agent(i));
        ++report.comparisons;
        if (after < before - kStrictMargin) {
          report.record(Violation{inst, {i}, a, dev, {before}, {after}});
        }
      }
      set_action(dev, i, own);
    }
  });
  return report;
}

namespace {

AuditReport run_chunks(std::size_t size, std::size_t workers,
                       const std::function<AuditReport(std::size_t, std::size_t)>& chunk) {
  workers = std::max<std::size_t>(1, std::min(workers, size == 0 ? 1 : size));
  std::vector<AuditReport> parts(workers);
  if (workers == 1) {
    parts[0] = chunk(0, size);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = size * w / workers;
      const std::size_t hi = size * (w + 1) / workers;
      threads.emplace_back([&, w, lo, hi] {
        try {
          parts[w] = chunk(lo, hi);
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
  AuditReport out;
  for (const auto& p : parts) {
    out.merge(p);
  }
  return out;
}

} // namespace

AuditReport audit_unilateral(const Mechanism& mech, const InstanceFamily& family,
                             const DeviationSpace& space, std::size_t workers) {
  AuditReport out = run_chunks(family.size, workers, [&](std::size_t lo, std::size_t hi) {
    AuditReport part;
    for (std::size_t i = lo; i < hi; ++i) {
      part.merge(audit_unilateral(mech, family.at(i), space));
    }
    return part;
  });
  out.search_space = describe(space, mech.input_kind()) + "; " + family.description;
  return out;
}

AuditReport audit_universal_wpv(const WpvWeights& w, const InstanceFamily& family, std::size_t workers) {
  AuditReport out;
  for (std::size_t k = 0; k < w.n(); ++k) {
    if (w[k] > 0.0) {
      out.merge(audit_unilateral(percentile(k + 1), family, {}, workers));
    }
  }
  out.search_space = "percentile decomposition of n=" + std::to_string(w.n()) + "; " + family.description;
  return out;
}

std::vector<AuditReport> audit_universal_wpv(const std::vector<WpvWeights>& weights,
                                             const std::function<InstanceFamily(std::size_t)>& family_for_n,
                                             std::size_t workers) {
  std::map<std::pair<std::size_t, std::size_t>, AuditReport> cache;
  std::map<std::size_t, InstanceFamily> families;
  std::vector<AuditReport> out;
  for (const auto& w : weights) {
    const std::size_t n = w.n();
    auto fit = families.find(n);
    if (fit == families.end()) {
      fit = families.emplace(n, family_for_n(n)).first;
    }
    AuditReport report;
    for (std::size_t k = 0; k < n; ++k) {
      if (w[k] <= 0.0) {
        continue;
      }
      auto it = cache.find({n, k});
      if (it == cache.end()) {
        it = cache.emplace(std::make_pair(n, k), audit_unilateral(percentile(k + 1), fit->second, {}, workers))
                 .first;
      }
      report.merge(it->second);
    }
    report.search_space = "percentile decomposition of n=" + std::to_string(n) + "; " + fit->second.description;
    out.push_back(std::move(report));
  }
  return out;
}

AuditReport audit_gsp(const Mechanism& mech, const Instance& inst, std::size_t max_coalition) {
  if (mech.input_kind() != InputKind::voting) {
    throw InvalidInput("the group audit covers voting mechanisms only");
  }
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  if (n > 6) {
    throw SpaceOverflow("the group audit is limited to n <= 6");
  }
  max_coalition = std::min(max_coalition, n);
  double space_size = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (size <= max_coalition) {
      space_size += std::pow(static_cast<double>(m), static_cast<double>(size));
    }
  }
  if (space_size > 1e6) {
    throw SpaceOverflow("joint deviation space exceeds 10^6");
  }

  AuditReport report;
  report.instances = 1;
  report.search_space = "coalitions up to " + std::to_string(max_coalition) + ", joint votes";
  const auto& election = inst.election();
  for_each_truthful_profile(inst, InputKind::voting, [&](const ActionProfile& a) {
    const Lottery base = mech(election, a);
    const auto& votes = std::get<Votes>(a);
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) {
          members.push_back(i);
        }
      }
      if (members.size() > max_coalition) {
        continue;
      }
      std::vector<double> before;
      for (auto i : members) {
        before.push_back(agent_expected_cost(election, base, inst.agent(i)));
      }
      std::vector<std::size_t> digits(members.size(), 0);
      while (true) {
        Votes dev = votes;
        bool changed = false;
        for (std::size_t k = 0; k < members.size(); ++k) {
          dev[members[k]] = digits[k];
          changed = changed || digits[k] != votes[members[k]];
        }
        if (changed) {
          const Lottery lot = mech(election, dev);
          std::vector<double> after;
          bool all_gain = true;
          for (std::size_t k = 0; k < members.size(); ++k) {
            after.push_back(agent_expected_cost(election, lot, inst.agent(members[k])));
            all_gain = all_gain && after.back() < before[k] - kStrictMargin;
          }
          ++report.comparisons;
          if (all_gain) {
            report.record(Violation{inst, members, a, dev, before, after});
          }
        }
        std::size_t k = members.size();
        while (k > 0 && ++digits[k - 1] == m) {
          digits[k - 1] = 0;
          --k;
        }
        if (k == 0) {
          break;
        }
      }
    }
  });
  return report;
}

bool ProbeResult::equal(double tol) const { return std::abs(cost_first - cost_second) <= tol; }

ProbeResult border_equal_probe(const Mechanism& mech, const Instance& inst, std::size_t agent, double h) {
  if (agent >= inst.n()) {
    throw InvalidInput("agent index out of range");
  }
  const auto& election = inst.election();
  const InputKind kind = mech.input_kind();
  auto options = truthful_actions(inst, kind);
  std::vector<Action> base;
  for (const auto& o : options) {
    base.push_back(o.front());
  }
  ProbeResult out;
  if (kind == InputKind::location) {
    if (election.metric().kind() == MetricKind::explicit_matrix) {
      throw InvalidInput("one-sided location probes need a coordinate space");
    }
    Point lo = inst.agent(agent);
    Point hi = lo;
    lo.coords[0] -= h;
    hi.coords[0] += h;
    out.first = lo;
    out.second = hi;
  } else {
    if (options[agent].size() < 2) {
      throw PreconditionFailed("agent " + std::to_string(agent + 1) + " is not on a border");
    }
    out.first = options[agent][0];
    out.second = options[agent][1];
  }
  base[agent] = out.first;
  out.cost_first = agent_cost(mech, inst, make_profile(kind, base), agent);
  base[agent] = out.second;
  out.cost_second = agent_cost(mech, inst, make_profile(kind, base), agent);
  return out;
}

bool replay(const Mechanism& mech, const Violation& v) {
  const auto& election = v.instance.election();
  const Lottery before = mech(election, v.truthful);
  const Lottery after = mech(election, v.deviated);
  for (auto i : v.agents) {
    const double c0 = agent_expected_cost(election, before, v.instance.agent(i));
    const double c1 = agent_expected_cost(election, after, v.instance.agent(i));
    if (!(c1 < c0 - kStrictMargin)) {
      return false;
    }
  }
  return !v.agents.empty();
}

} // namespace spikelab
