#include <doctest.h>

#include <cmath>

#include "spikelab/adversary.hpp"
#include "spikelab/compression.hpp"
#include "spikelab/error.hpp"
#include "spikelab/evaluation.hpp"
#include "spikelab/mechanisms.hpp"
#include "support.hpp"

using namespace spikelab;

namespace {

std::vector<double> locs(const Instance& inst) { return testsupport::xs_of(inst); }

GroupedProfile groups(std::vector<double> xs) { return GroupedProfile::from_locations(std::move(xs)); }

Instance negate(const Instance& inst) {
  std::vector<double> ys, xs;
  for (std::size_t j = inst.m(); j-- > 0;) {
    ys.push_back(-inst.election().y(j));
  }
  for (double x : locs(inst)) {
    xs.push_back(-x);
  }
  return Instance::on_line(ys, xs);
}

} // namespace

TEST_CASE("grouped profiles") {
  const auto g = groups({3, 1, 3, 2});
  CHECK(g.groups == std::vector<Group>{{1, 1}, {2, 1}, {3, 2}});
  CHECK(g.n() == 4);
  CHECK(g.locations() == std::vector<double>{1, 2, 3, 3});
  CHECK_THROWS_AS((GroupedProfile{{{2, 1}, {1, 1}}}.validate()), InvalidInput);
  CHECK_THROWS_AS((GroupedProfile{{{2, 0}}}.validate()), InvalidInput);
}

TEST_CASE("tight profile") {
  const auto inst = Instance::on_line({0, 10, 20}, {2, 12, 17, 15});
  CHECK(locs(tight_profile(inst, 1)) == std::vector<double>{5, 10, 15, 15});
  const auto borders = Instance::on_line({0, 10, 20}, {5, 15, 5});
  CHECK(locs(tight_profile(borders, 1)) == locs(borders));
  const auto centred = Instance::on_line({0, 10, 20}, {10, 10});
  CHECK(locs(tight_profile(centred)) == locs(centred));
  CHECK(is_tight(GroupedProfile::from_instance(tight_profile(inst, 1)), inst.election(), 1));
  CHECK_FALSE(is_tight(GroupedProfile::from_instance(inst), inst.election(), 1));
}

TEST_CASE("left and right compression") {
  const auto e = Election::on_line({0, 10, 20, 30});
  CHECK(left_compress(groups({5, 15, 20}), e, 2) == groups({15, 15, 20}));
  CHECK(left_compress(groups({15, 20, 25}), e, 2) == groups({15, 20, 25}));
  CHECK(left_compress(groups({20, 20}), e, 2) == groups({20, 20}));
  CHECK_THROWS_AS(left_compress(groups({7, 20}), e, 2), PreconditionFailed);

  const auto mirrored = Election::on_line({-30, -20, -10, 0});
  CHECK(right_compress(groups({-20, -15, -5}), mirrored, 1) == groups({-20, -15, -15}));
  CHECK(right_compress(groups({-25, -20, -15}), mirrored, 1) == groups({-25, -20, -15}));
  CHECK(right_compress(groups({-20}), mirrored, 1) == groups({-20}));
  CHECK(right_compress(groups({10, 25, 35}), Election::on_line({0, 10, 20, 30, 40}), 1) ==
        groups({10, 25, 25}));
}

TEST_CASE("full compression") {
  const auto inst = Instance::on_line({0, 10, 20, 30, 40, 50}, {5, 15, 15, 25, 30, 35, 35, 45});
  const auto r = compress_fully(inst);
  CHECK(r.opt == 3);
  CHECK(r.reduction.L == 4);
  CHECK(r.reduction.C == 1);
  CHECK(r.reduction.R == 3);
  CHECK(r.reduction.beta == doctest::Approx(1.0));
  CHECK(r.trace.front() == GroupedProfile::from_instance(tight_profile(inst, 3)));
  CHECK(r.trace.size() == 4);

  const auto all_at_opt = compress_fully(Instance::on_line({0, 10, 20}, {10, 10, 10}));
  CHECK(all_at_opt.reduction.L == 0);
  CHECK(all_at_opt.reduction.C == 3);
  CHECK(all_at_opt.reduction.R == 0);

  const auto gap = compress_fully(gap_instance(0.1).x);
  CHECK(gap.opt == 0);
  CHECK(gap.reduction.L == 0);
  CHECK(gap.reduction.C == 1);
  CHECK(gap.reduction.R == 1);
  CHECK(gap.reduction.beta == 1.0);
}

TEST_CASE("outward votes") {
  const auto inst = Instance::on_line({0, 10, 20}, {5, 10, 15, 3});
  CHECK(outward_votes(inst, 1) == Votes{0, 1, 2, 0});
  CHECK(outward_votes(Instance::on_line({0, 10, 20}, {15}), 2) == Votes{1});
}

TEST_CASE("three-candidate closed form") {
  CHECK(three_candidate_spike_ratio({1, 1, 1, 1.0}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(three_candidate_spike_ratio({3, 1, 1, 1.0}) == doctest::Approx(23.0 / 12).epsilon(1e-12));
  CHECK(three_candidate_spike_ratio({0, 5, 0, 1.0}) == 1.0);
  const auto parts = three_candidate_spike({3, 1, 1, 1.0});
  CHECK(parts.cost_left == doctest::Approx(1 * (3 + 2 + 2) + 1));
  CHECK(parts.cost_center == doctest::Approx(4));
  CHECK(parts.cost_right == doctest::Approx(3 + 6 + 2 + 1));
  CHECK(parts.p_left + parts.p_center + parts.p_right == doctest::Approx(1.0));
}

TEST_CASE("property: closed form matches direct evaluation on the realized profile") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 3000; ++trial) {
    ThreeCandidateReduction r;
    r.L = rng.between(0, 12);
    r.C = rng.between(0, 12);
    r.R = rng.between(0, 12);
    if (r.n() == 0) {
      continue;
    }
    r.beta = std::ldexp(1.0, static_cast<int>(rng.between(0, 8)) - 4);
    const auto inst = realize_reduction(r);
    const auto form = three_candidate_spike(r);
    const double direct = lottery_social_cost(spike()(inst.election(), outward_votes(inst, 1)), inst);
    CHECK(std::abs(direct - form.expected_cost) <= 1e-9 * std::max(1.0, direct));
    CHECK(std::abs(candidate_cost(inst, 1) - form.cost_center) <= 1e-9);
    if (!form.infinite) {
      CHECK(form.ratio <= 2 + 1e-9);
    }
  }
}

TEST_CASE("property: tightening and compression on random instances") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 1500; ++trial) {
    const auto inst = testsupport::random_line(rng, 8, 6, trial % 2 == 0);
    const auto opt = optimal_candidate(inst).index;
    const auto tight = tight_profile(inst, opt);
    CHECK(optimal_candidate(tight).index == opt);
    CHECK(is_tight(GroupedProfile::from_instance(tight), inst.election(), opt));
    CHECK(locs(tight_profile(tight, opt)) == locs(tight));

    const auto w = wpv(WpvWeights(testsupport::random_weights(rng, inst.n())));
    CHECK(ratio_for_profile(w, tight, outward_votes(tight, opt)).ratio >=
          approximation_ratio(w, inst).ratio - 1e-9);

    const auto r = compress_fully(inst);
    CHECK(r.opt == opt);
    CHECK(r.reduction.n() == inst.n());
    const auto last = r.trace.back();
    CHECK(left_compress(last, inst.election(), opt) == last);
    CHECK(right_compress(last, inst.election(), opt) == last);
    for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) {
      const auto a = r.trace[k].to_instance(inst.election());
      const auto b = r.trace[k + 1].to_instance(inst.election());
      const double sa = lottery_social_cost(spike()(a.election(), outward_votes(a, opt)), a);
      const double sb = lottery_social_cost(spike()(b.election(), outward_votes(b, opt)), b);
      CHECK(sa - sb <= 2 * (candidate_cost(a, opt) - candidate_cost(b, opt)) + 1e-9);
    }

    // mirror symmetry of the counts
    const auto m = compress_fully(negate(inst));
    if (m.opt == inst.m() - 1 - opt) {
      CHECK(m.reduction.L == r.reduction.R);
      CHECK(m.reduction.R == r.reduction.L);
      CHECK(m.reduction.C == r.reduction.C);
    }
  }
}
