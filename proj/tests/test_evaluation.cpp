#include <doctest.h>

#include <cmath>

#include "spikelab/adversary.hpp"
#include "spikelab/error.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/mechanisms.hpp"
#include "support.hpp"

using namespace spikelab;

TEST_CASE("candidate costs") {
  const double eps = 0.01;
  const auto gap = gap_instance(eps);
  CHECK(candidate_cost(gap.x, 0) == doctest::Approx(1 + eps));
  CHECK(candidate_cost(gap.x, 1) == doctest::Approx(3 - eps));
  CHECK(candidate_cost(Instance::on_line({0, 4}, {4, 4, 4}), 1) == 0.0);

  const auto report = triangle_audit(uniform_ranking());
  REQUIRE(report.witness.has_value());
  // unit edges, so distances are half those of the scaling |y3 - Q| = |Q - y2| = 1
  CHECK(2 * candidate_cost(*report.witness, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(2 * candidate_cost(*report.witness, 2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("optimal candidate") {
  CHECK(optimal_candidate(Instance::on_line({-1, 1}, {0})).index == 0);
  const auto gap = gap_instance(0.25).x;
  CHECK(optimal_candidate(gap).index == 0);
  CHECK(optimal_candidate(gap).cost == doctest::Approx(1.25));
  const auto opt = optimal_candidate(Instance::on_line({0, 10, 20}, {9, 10, 11}));
  CHECK(opt.index == 1);
  CHECK(opt.cost == 2.0);
}

TEST_CASE("lottery social cost") {
  const double eps = 0.3;
  const auto x = gap_instance(eps).x;
  CHECK(lottery_social_cost(Lottery::point_mass(2, 1), x) == doctest::Approx(3 - eps));
  CHECK(lottery_social_cost(Lottery{{0.5, 0.5}}, x) == doctest::Approx(2.0));
  const Election tri(MetricSpace::euclidean(2), equilateral_triangle());
  Point centre({0, 0});
  for (const auto& c : tri.candidates()) {
    centre.coords[0] += c.coords[0] / 3;
    centre.coords[1] += c.coords[1] / 3;
  }
  const Instance one(tri, {centre});
  CHECK(lottery_social_cost(Lottery::uniform(3), one) == doctest::Approx(1 / std::sqrt(3.0)));
}

TEST_CASE("truthful profiles") {
  CHECK(truthful_action_profiles(Instance::on_line({-1, 1}, {0}), InputKind::voting).size() == 2);
  CHECK(truthful_action_profiles(Instance::on_line({-1, 1}, {-3, 0.5, 2}), InputKind::voting).size() == 1);
  CHECK(truthful_action_profiles(Instance::on_line({-1, 1}, {0, 0, 0}), InputKind::location).size() == 1);
  CHECK(truthful_profile_count(Instance::on_line({-1, 0, 1}, {0.5, 0.5}), InputKind::ranking) == 4);
  std::vector<double> xs(21, 0.0);
  CHECK_THROWS_AS(truthful_profile_count(Instance::on_line({-1, 1}, xs), InputKind::voting), SpaceOverflow);

  // odometer order, last agent fastest
  const auto profiles = truthful_action_profiles(Instance::on_line({-1, 1}, {0, 0}), InputKind::voting);
  REQUIRE(profiles.size() == 4);
  CHECK(std::get<Votes>(profiles[1]) == Votes{0, 1});
  CHECK(std::get<Votes>(profiles[2]) == Votes{1, 0});
}

TEST_CASE("worst truthful cost and ratios") {
  const double eps = 0.001;
  const auto gap = gap_instance(eps);
  CHECK(worst_truthful_social_cost(spike(), gap.x).cost == doctest::Approx(2.0));
  CHECK(worst_truthful_social_cost(median(), gap.x_prime).cost == doctest::Approx(3 - eps));
  CHECK(worst_truthful_social_cost(spike(), Instance::on_line({2}, {2, 2})).cost == 0.0);

  CHECK(approximation_ratio(spike(), gap.x).ratio == doctest::Approx(2 / (1 + eps)).epsilon(1e-12));
  CHECK(approximation_ratio(median(), gap.x_prime).ratio == doctest::Approx((3 - eps) / (1 + eps)).epsilon(1e-12));

  // one border agent: the worse of its two votes counts
  CHECK(approximation_ratio(median(), Instance::on_line({-1, 1}, {0, 1})).ratio == doctest::Approx(3.0));

  const auto zero = approximation_ratio(median(), Instance::on_line({0, 1}, {0}));
  CHECK(zero.ratio == 1.0);
  CHECK_FALSE(zero.infinite);
  const auto inf = make_ratio(1.0, OptimalCandidate{0, 0.0});
  CHECK(inf.infinite);
}

TEST_CASE("random dictator on its worst instance, direct value against the printed formula") {
  const auto inst = rd_worst_instance(4, 0.01);
  const double direct = approximation_ratio(random_dictator(), inst).ratio;
  CHECK(direct == doctest::Approx((3 - 0.5 + 0.01 - 0.005) / 1.01).epsilon(1e-12));
  CHECK(direct == doctest::Approx(2.4802).epsilon(1e-4));
  CHECK(rd_worst_ratio_formula(4, 0.01) == doctest::Approx(2.4901).epsilon(1e-4));
  // the two differ by 4 eps / (n (1 + eps))
  CHECK(rd_worst_ratio_formula(4, 0.01) - direct == doctest::Approx(4 * 0.01 / (4 * 1.01)).epsilon(1e-9));
}

TEST_CASE("csv rows") {
  const auto r = approximation_ratio(spike(), gap_instance(0.5).x);
  CHECK(ratio_csv_header() == "instance-id,mechanism,worst_cost,opt_cost,opt_candidate,ratio");
  CHECK(ratio_csv_row("g", "spike", r).rfind("g,spike,", 0) == 0);
}

TEST_CASE("property: ratio and cost invariants on random instances") {
  SplitMix64 rng(77);
  const std::vector<Mechanism> mechs{spike(), median(), random_dictator(), percentile(1)};
  for (int trial = 0; trial < 1500; ++trial) {
    const auto inst = testsupport::random_line(rng, 6, 6, trial % 3 == 0);
    const auto costs = candidate_costs(inst);
    const auto xs = testsupport::xs_of(inst);
    for (std::size_t j = 0; j < inst.m(); ++j) {
      CHECK(std::abs(costs[j] - testsupport::line_cost(xs, inst.election().y(j))) <= 1e-9);
    }
    const auto opt = optimal_candidate(inst);
    for (std::size_t j = 0; j < inst.m(); ++j) {
      CHECK(opt.cost <= costs[j] + 1e-12);
    }

    for (const auto& mech : mechs) {
      const auto r = approximation_ratio(mech, inst);
      if (!r.infinite) {
        CHECK(r.ratio >= 1 - 1e-12);
      }
      if (!mech.randomized()) {
        const auto w = worst_truthful_social_cost(mech, inst);
        CHECK(std::abs(w.cost - costs[w.lottery.point_mass_index()]) <= 1e-12);
      }
    }

    // linearity of the social cost in the lottery
    const auto a = Lottery{testsupport::random_weights(rng, inst.m())};
    const auto b = Lottery{testsupport::random_weights(rng, inst.m())};
    const double alpha = rng.uniform();
    Lottery mix{std::vector<double>(inst.m())};
    for (std::size_t j = 0; j < inst.m(); ++j) {
      mix.probs[j] = alpha * a[j] + (1 - alpha) * b[j];
    }
    const double lhs = lottery_social_cost(mix, inst);
    const double rhs = alpha * lottery_social_cost(a, inst) + (1 - alpha) * lottery_social_cost(b, inst);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));

    // translation invariance of the optimum
    const double shift = std::round(rng.uniform(-50, 50));
    std::vector<double> ys, moved;
    for (std::size_t j = 0; j < inst.m(); ++j) {
      ys.push_back(inst.election().y(j) + shift);
    }
    for (double x : xs) {
      moved.push_back(x + shift);
    }
    CHECK(optimal_candidate(Instance::on_line(ys, moved)).index == opt.index);
  }
}
