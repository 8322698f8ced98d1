#include <doctest.h>

#include <cmath>

#include "spikelab/error.hpp"
#include "spikelab/geometry.hpp"
#include "support.hpp"

using namespace spikelab;

TEST_CASE("distance on the line, in the plane and on identical points") {
  const double eps = 0.25;
  CHECK(distance(MetricSpace::line(), Point::on_line(-1), Point::on_line(eps)) == doctest::Approx(1 + eps));
  CHECK(distance(MetricSpace::euclidean(2), Point({0, 0}), Point({3, 4})) == doctest::Approx(5));
  CHECK(distance(MetricSpace::euclidean(3), Point({1, 2, 3}), Point({1, 2, 3})) == 0.0);
  const auto m = MetricSpace::explicit_matrix({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  CHECK(distance(m, Point::at_index(2), Point::at_index(2)) == 0.0);
  CHECK(distance(m, Point::at_index(0), Point::at_index(2)) == 2.0);
}

TEST_CASE("distance rejects foreign points") {
  CHECK_THROWS_AS(distance(MetricSpace::euclidean(2), Point({0, 0}), Point({1, 2, 3})), InvalidInput);
  const auto m = MetricSpace::explicit_matrix({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(distance(m, Point::at_index(0), Point::at_index(5)), InvalidInput);
}

TEST_CASE("explicit metrics are validated") {
  CHECK_THROWS_AS(MetricSpace::explicit_matrix({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), InvalidInput);
  CHECK_THROWS_AS(MetricSpace::explicit_matrix({{0, 1}, {2, 0}}), InvalidInput);
  CHECK_THROWS_AS(MetricSpace::explicit_matrix({{1, 1}, {1, 0}}), InvalidInput);
  CHECK_NOTHROW(MetricSpace::explicit_matrix({{0, 1, 2 + 1e-10}, {1, 0, 1}, {2 + 1e-10, 1, 0}}));
  CHECK_THROWS_AS(MetricSpace::euclidean(0), InvalidInput);
}

TEST_CASE("line candidates must be distinct and increasing") {
  CHECK_THROWS_AS(Election::on_line({0, 0}), InvalidInput);
  CHECK_THROWS_AS(Election::on_line({1, 0}), InvalidInput);
  CHECK_THROWS_AS(Election::on_line({}), InvalidInput);
  CHECK_THROWS_AS(Instance::on_line({0, 1}, {}), InvalidInput);
}

TEST_CASE("voting borders are consecutive midpoints") {
  CHECK(voting_borders(Election::on_line({-1, 1})) == std::vector<double>{0});
  CHECK(voting_borders(Election::on_line({4, 14, 22, 30})) == std::vector<double>{9, 18, 26});
  CHECK(voting_borders(Election::on_line({0, 10, 20})) == std::vector<double>{5, 15});
  CHECK(voting_borders(Election::on_line({3})).empty());
}

TEST_CASE("favorite candidates") {
  const auto e = Election::on_line({-1, 1});
  CHECK(favorite_candidates(e, Point::on_line(0)) == std::vector<CandidateIndex>{0, 1});
  CHECK(favorite_candidates(e, Point::on_line(0.3)) == std::vector<CandidateIndex>{1});
  const Election tri(MetricSpace::euclidean(2), {Point({0, 0}), Point({1, 0}), Point({0.5, std::sqrt(3.0) / 2})});
  CHECK(favorite_candidates(tri, Point({0.5, std::sqrt(3.0) / 6})) == std::vector<CandidateIndex>{0, 1, 2});
}

TEST_CASE("true rankings") {
  const auto e = Election::on_line({-1, 0, 1});
  CHECK(true_rankings(e, Point::on_line(-0.9)) == std::vector<Ranking>{{0, 1, 2}});
  CHECK(true_rankings(e, Point::on_line(0.5)) == std::vector<Ranking>{{1, 2, 0}, {2, 1, 0}});
  CHECK(true_rankings(Election::on_line({0, 2}), Point::on_line(2)) == std::vector<Ranking>{{1, 0}});
}

TEST_CASE("ranking zones") {
  const auto three = ranking_zones_line(Election::on_line({0, 2, 3}));
  REQUIRE(three.zones.size() == 4);
  CHECK(three.ranking_borders == std::vector<double>{1, 1.5, 2.5});
  CHECK(three.zones[0].ranking == Ranking{0, 1, 2});
  CHECK(three.zones[1].ranking == Ranking{1, 0, 2});
  CHECK(three.zones[2].ranking == Ranking{1, 2, 0});
  CHECK(three.zones[3].ranking == Ranking{2, 1, 0});
  CHECK(three.zones[0].representative == 0.0);
  CHECK(three.zones[1].representative == 1.25);
  CHECK(three.zones[3].representative == 3.5);
  CHECK(three.zone_of({1, 2, 0}) == 2u);
  CHECK_FALSE(three.zone_of({0, 2, 1}).has_value());

  const auto two = ranking_zones_line(Election::on_line({-1, 1}));
  CHECK(two.zones.size() == 2);
  const auto one = ranking_zones_line(Election::on_line({5}));
  REQUIRE(one.zones.size() == 1);
  CHECK(std::isinf(one.zones[0].lower));
  CHECK(std::isinf(one.zones[0].upper));
}

TEST_CASE("all rankings are the m! permutations in lexicographic order") {
  const auto r = all_rankings(3);
  REQUIRE(r.size() == 6);
  CHECK(r.front() == Ranking{0, 1, 2});
  CHECK(r.back() == Ranking{2, 1, 0});
  CHECK(all_rankings(5).size() == 120);
}

TEST_CASE("property: zone and border invariants on random lines") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = testsupport::random_line(rng, 6, 6, trial % 2 == 0);
    const auto& e = inst.election();
    const auto zp = ranking_zones_line(e);
    const auto& y = e.line_positions();
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      CHECK(std::abs(zp.voting_borders[i] - (y[i] + y[i + 1]) / 2) <= 1e-12);
      // every voting border is a ranking border
      CHECK(std::any_of(zp.ranking_borders.begin(), zp.ranking_borders.end(),
                        [&](double b) { return std::abs(b - zp.voting_borders[i]) <= 1e-12; }));
    }
    for (std::size_t z = 0; z < zp.zones.size(); ++z) {
      const auto& zone = zp.zones[z];
      CHECK(zone.lower < zone.representative);
      CHECK(zone.representative < zone.upper);
      if (z + 1 < zp.zones.size()) {
        CHECK(zone.upper == zp.zones[z + 1].lower);
      }
      CHECK(true_rankings(e, Point::on_line(zone.representative)) == std::vector<Ranking>{zone.ranking});
    }
    for (const auto& x : inst.agents()) {
      const auto favs = favorite_candidates(e, x);
      const bool on_border = std::any_of(zp.voting_borders.begin(), zp.voting_borders.end(),
                                         [&](double b) { return std::abs(b - x.x()) <= 1e-9; });
      CHECK((favs.size() == 1) == !on_border);
      for (const auto& r : true_rankings(e, x)) {
        CHECK(std::find(favs.begin(), favs.end(), r.front()) != favs.end());
      }
    }
  }
}
