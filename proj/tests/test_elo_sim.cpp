#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "iqa/elo_sim.hpp"
#include "iqa/errors.hpp"

using namespace iqa::elo;

namespace {

SimulationOptions options(Strategy st, std::uint64_t seed, std::uint64_t total, std::uint64_t every) {
  SimulationOptions o;
  o.strategy = st;
  o.seed = seed;
  o.total_judgements = total;
  o.checkpoint_every = every;
  return o;
}

}  // namespace

TEST(EloSim, PopulationShape) {
  const Population p = make_population(150, 3);
  ASSERT_EQ(p.items.size(), 150u);
  EXPECT_EQ(p.items.front().id, "p0");
  EXPECT_EQ(p.items.back().id, "p149");
  std::set<double> truths;
  double sum = 0, sq = 0;
  for (const auto& it : p.items) {
    truths.insert(it.truth);
    sum += it.truth;
    sq += it.truth * it.truth;
  }
  EXPECT_EQ(truths.size(), 150u);
  const double mean = sum / 150, sd = std::sqrt(sq / 150 - mean * mean);
  EXPECT_NEAR(mean, 1400, 4 * kDefaultSpread / std::sqrt(150.0));
  EXPECT_NEAR(sd, kDefaultSpread, 0.25 * kDefaultSpread);

  const Population again = make_population(150, 3);
  for (std::size_t i = 0; i < 150; ++i) EXPECT_EQ(again.items[i].truth, p.items[i].truth);
  EXPECT_EQ(make_population(5, 1, 100, 400, "q").items[4].id, "q4");
  EXPECT_THROW(make_population(1, 1), iqa::ArgumentError);
}

TEST(EloSim, SimulatedRaterFollowsLogistic) {
  Rng rng(42);
  const int n = 100000;
  int even = 0, strong = 0;
  for (int i = 0; i < n; ++i) {
    even += simulate_judgement(1400, 1400, 400, rng);
    strong += simulate_judgement(1800, 1400, 400, rng);
  }
  EXPECT_NEAR(even / double(n), 0.5, 0.02);
  EXPECT_NEAR(strong / double(n), 1.0 / 1.1, 0.01);
}

TEST(EloSim, CheckpointsAndDeterminism) {
  const Population p = make_population(40, 9);
  const auto a = run_simulation(p, options(Strategy::similar, 5, 2550, 500));
  ASSERT_EQ(a.points.size(), 6u);
  EXPECT_EQ(a.points[0].judgements, 500u);
  EXPECT_EQ(a.points.back().judgements, 2550u);
  const auto b = run_simulation(p, options(Strategy::similar, 5, 2550, 500));
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i].srcc, b.points[i].srcc);
  const auto c = run_simulation(p, options(Strategy::similar, 6, 2550, 500));
  EXPECT_NE(a.final_srcc(), c.final_srcc());

  ConvergenceCurve curve{{{100, 0.5}, {200, 0.91}, {300, 0.89}, {400, 0.95}}};
  EXPECT_EQ(curve.first_reaching(0.9), 200u);
  EXPECT_FALSE(curve.first_reaching(0.99).has_value());
  EXPECT_EQ(curve_csv(curve).substr(0, 23), "judgements,srcc\n100,0.5");
  EXPECT_THROW(run_simulation(p, options(Strategy::similar, 1, 10, 20)), iqa::ArgumentError);
}

TEST(EloSim, ExpandabilityWithoutNewItemsMatchesPlainRun) {
  const Population p = make_population(30, 2);
  const auto opts = options(Strategy::random, 7, 0, 100);
  const auto exp = run_expandability(p, Population{}, opts, 1000, 500);
  auto plain_opts = opts;
  plain_opts.total_judgements = 1500;
  const auto plain = run_simulation(p, plain_opts);
  ASSERT_EQ(exp.curve.points.size(), plain.points.size());
  for (std::size_t i = 0; i < plain.points.size(); ++i) EXPECT_EQ(exp.curve.points[i].srcc, plain.points[i].srcc);
  EXPECT_EQ(exp.original_srcc_after, plain.final_srcc());

  // Phase-1 scores are what a run stopped at phase 1 would end with.
  const auto head = run_expandability(p, Population{}, opts, 1000, 0);
  EXPECT_EQ(head.post_add_scores, exp.pre_add_scores);
}

TEST(EloSim, ExpandabilityRejectsCollidingIds) {
  const Population p = make_population(10, 1);
  EXPECT_THROW(run_expandability(p, make_population(3, 2), options(Strategy::similar, 1, 0, 10), 100, 100),
               iqa::ArgumentError);
  const auto r = run_expandability(p, make_population(3, 2, 400, 400, "new"), options(Strategy::similar, 1, 0, 10),
                                   100, 100);
  EXPECT_EQ(r.pre_add_scores.size(), 10u);
  EXPECT_EQ(r.post_add_scores.size(), 10u);
}

// Thresholds and seeds below come from the committed pilot (seeds 1-5,
// 150 items, K=16, M=400, spread 400, checkpoints every 100).

TEST(EloSimPilot, SimilarReachesPointNine) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto curve = run_simulation(make_population(150, seed), options(Strategy::similar, seed, 200000, 100));
    EXPECT_TRUE(curve.first_reaching(0.9).has_value()) << "seed " << seed;
    EXPECT_GE(curve.final_srcc(), 0.9);
  }
}

TEST(EloSimPilot, SimilarNeedsNoMoreJudgementsThanRandom) {
  double similar = 0, random = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Population p = make_population(150, seed);
    const auto s = run_simulation(p, options(Strategy::similar, seed, 20000, 100)).first_reaching(0.9);
    const auto r = run_simulation(p, options(Strategy::random, seed, 20000, 100)).first_reaching(0.9);
    ASSERT_TRUE(s && r);
    similar += static_cast<double>(*s);
    random += static_cast<double>(*r);
  }
  EXPECT_LE(similar / 5, random / 5);
}

TEST(EloSimPilot, FinalSrccStableAcrossM) {
  std::vector<double> finals;
  for (double m : {200.0, 400.0, 800.0}) {
    double sum = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto o = options(Strategy::similar, seed, 200000, 10000);
      o.config.m = m;
      sum += run_simulation(make_population(150, seed, kDefaultSpread, m), o).final_srcc();
    }
    finals.push_back(sum / 5);
  }
  const auto [lo, hi] = std::minmax_element(finals.begin(), finals.end());
  EXPECT_LE(*hi - *lo, 0.02);
}

TEST(EloSimPilot, ExpandabilityKeepsOriginalRanking) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Population p = make_population(150, seed);
    const Population added = make_population(40, seed + 1000, kDefaultSpread, 400, "new");
    const auto r = run_expandability(p, added, options(Strategy::similar, seed, 0, 10000), 200000, 100000);
    EXPECT_GE(r.combined_srcc_after, 0.9) << "seed " << seed;
    EXPECT_LE(r.original_srcc_before - r.original_srcc_after, 0.03) << "seed " << seed;
  }
}
