#include <doctest.h>

#include <cmath>

#include "spikelab/adversary.hpp"
#include "spikelab/error.hpp"
#include "spikelab/mechanisms.hpp"
#include "spikelab/truthfulness.hpp"
#include "support.hpp"

using namespace spikelab;

namespace {

// Every placement of n agents on `grid` with the candidates fixed.
InstanceFamily fixed_family(const std::vector<double>& ys, const std::vector<double>& grid, std::size_t n) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    size *= grid.size();
  }
  return {size,
          [=](std::size_t idx) {
            std::vector<double> xs(n);
            for (std::size_t i = n; i-- > 0;) {
              xs[i] = grid[idx % grid.size()];
              idx /= grid.size();
            }
            return Instance::on_line(ys, xs);
          },
          "fixed"};
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  for (int k = 0; lo + k * step <= hi + 1e-12; ++k) {
    out.push_back(lo + k * step);
  }
  return out;
}

// Location mechanism that elects C1 for reports left of 0.5 and C3 otherwise.
Mechanism split_at_half() {
  return Mechanism("split", InputKind::location, false, Truthfulness::none,
                   [](const Election&, const ActionProfile& a) {
                     return Lottery::point_mass(3, std::get<Locations>(a)[0].x() < 0.5 ? 0 : 2);
                   });
}

} // namespace

TEST_CASE("deviation spaces") {
  const auto e = Election::on_line({0, 1, 2});
  CHECK(deviation_actions(e, InputKind::voting, {}).size() == 3);
  CHECK(deviation_actions(e, InputKind::ranking, {}).size() == 6);
  DeviationSpace space;
  space.grid_step = 0.5;
  space.box_lo = 0.0;
  space.box_hi = 2.0;
  CHECK(deviation_actions(e, InputKind::location, space).size() == 5);
  space.grid_step = 1e-7;
  CHECK_THROWS_AS(deviation_actions(e, InputKind::location, space), SpaceOverflow);
  const auto big = Election::on_line({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  DeviationSpace small;
  small.max_size = 1000;
  CHECK_THROWS_AS(deviation_actions(big, InputKind::ranking, small), SpaceOverflow);
}

TEST_CASE("unilateral audits") {
  const auto lattice = lattice_line_family(3, 300, 4, 1, 4);
  CHECK(audit_unilateral(spike(), lattice).passed);
  CHECK(audit_unilateral(median(), lattice).passed);

  DeviationSpace fine;
  fine.grid_step = 0.01;
  fine.box_lo = -2.0;
  fine.box_hi = 6.0;
  const auto c4 = audit_unilateral(claim4_location(), fixed_family({0, 3, 4}, steps(-2, 6, 0.5), 2), fine);
  CHECK(c4.passed);
  CHECK(c4.comparisons > 0);

  const auto bad = audit_unilateral(anti_dictator(0), fixed_family({-1, 1}, {-1, 1}, 2));
  CHECK_FALSE(bad.passed);
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations.front().agents == std::vector<std::size_t>{0});
  for (const auto& v : bad.violations) {
    CHECK(replay(anti_dictator(0), v));
  }
}

TEST_CASE("family audits do not depend on the worker count") {
  const auto family = fixed_family({-1, 1}, steps(-2, 2, 0.5), 3);
  const auto one = audit_unilateral(claim5_components(3)[3].mechanism, family, {}, 1);
  const auto three = audit_unilateral(claim5_components(3)[3].mechanism, family, {}, 3);
  CHECK(one.violation_count == three.violation_count);
  CHECK(one.comparisons == three.comparisons);
}

TEST_CASE("universal WPV audits") {
  const auto family = [](std::size_t n) { return grid_line_family({-2, -1, 0, 1, 2}, n, 3); };
  CHECK(audit_universal_wpv(WpvWeights::spike(4), family(4)).passed);
  CHECK(audit_universal_wpv(WpvWeights::uniform(3), family(3)).passed);
  CHECK(audit_universal_wpv(WpvWeights::point_mass(3, 1), family(3)).passed);
  const auto batch = audit_universal_wpv({WpvWeights::spike(2), WpvWeights::uniform(2)}, family);
  REQUIRE(batch.size() == 2);
  CHECK(batch[0].passed);
  CHECK(batch[1].passed);
}

TEST_CASE("group strategyproofness") {
  const auto inst = Instance::on_line({-1, 0, 1}, {-0.51, 0.51});
  const auto report = audit_gsp(random_dictator(), inst, 2);
  CHECK_FALSE(report.passed);
  bool found = false;
  for (const auto& v : report.violations) {
    CHECK(v.agents.size() == 2);
    if (std::get<Votes>(v.deviated) == Votes{1, 1}) {
      found = true;
      CHECK(v.cost_before[0] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v.cost_before[1] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v.cost_after[0] == doctest::Approx(0.51).epsilon(1e-12));
      CHECK(v.cost_after[1] == doctest::Approx(0.51).epsilon(1e-12));
    }
    CHECK(replay(random_dictator(), v));
  }
  CHECK(found);

  CHECK(audit_gsp(dictator(0), Instance::on_line({-1, 0, 1}, {-0.7, 0.2, 0.9}), 3).passed);
  CHECK(audit_gsp(median(), Instance::on_line({-1, 0, 1}, {0.3}), 1).passed);
  CHECK_THROWS_AS(audit_gsp(claim4_location(), Instance::on_line({0, 3, 4}, {1}), 1), InvalidInput);
}

TEST_CASE("border-equal probe") {
  const auto c4 = border_equal_probe(claim4_location(), Instance::on_line({0, 3, 4}, {1}), 0);
  CHECK(c4.cost_first == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c4.cost_second == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(c4.equal(1e-6));

  const auto sp = border_equal_probe(spike(), Instance::on_line({-1, 1}, {0, -0.5, 0.5}), 0);
  CHECK(sp.equal());

  const auto split = border_equal_probe(split_at_half(), Instance::on_line({0, 1, 5}, {0.5}), 0);
  CHECK_FALSE(split.equal());
  CHECK(split.cost_first == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(split.cost_second == doctest::Approx(4.5).epsilon(1e-6));

  CHECK_THROWS(border_equal_probe(spike(), Instance::on_line({-1, 1}, {0.3}), 0));
}

TEST_CASE("claim5 is truthful in expectation but its draws are not truthful") {
  const auto family = fixed_family({-1, 1}, steps(-2, 2, 0.5), 3);
  CHECK(audit_unilateral(claim5_tie_voting(), family).passed);
  std::size_t failing = 0;
  for (const auto& c : claim5_components(3)) {
    failing += audit_unilateral(c.mechanism, family).passed ? 0 : 1;
  }
  CHECK(failing == 3);
}

TEST_CASE("property: universal WPV implies truthfulness in expectation; violations replay") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = rng.between(1, 4);
    const auto family = grid_line_family({-2, -1, 0, 1, 2}, n, 3);
    const WpvWeights w(testsupport::random_weights(rng, n));
    const auto universal = audit_universal_wpv(w, family);
    CHECK(universal.passed);
    if (universal.passed) {
      CHECK(audit_unilateral(wpv(w), family).passed);
    }
  }
  const auto bad = audit_unilateral(anti_dictator(1), fixed_family({-1, 1}, {-1, 0, 1}, 3));
  CHECK(bad.violation_count >= bad.violations.size());
  for (const auto& v : bad.violations) {
    CHECK(replay(anti_dictator(1), v));
  }
}
