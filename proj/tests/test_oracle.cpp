#include <gtest/gtest.h>

#include <set>

#include "spa/experiments.hpp"
#include "spa/oracle.hpp"
#include "test_support.hpp"

using namespace spa;
using spa::testing::make_dataset;

TEST(EnumerateFeasible, DisjointListsGiveTheFullProduct) {
  EXPECT_EQ(enumerate_feasible(spa::testing::disjoint_dataset(2)).size(), 16u);
}

TEST(EnumerateFeasible, IdenticalListsLoseTheDiagonal) {
  const Dataset d = make_dataset({{0, 1, 2, 3}, {0, 1, 2, 3}}, 4);
  const auto all = enumerate_feasible(d);
  EXPECT_EQ(all.size(), 12u);
  std::set<Allocation> unique(all.begin(), all.end());
  EXPECT_EQ(unique.size(), all.size());
}

TEST(EnumerateFeasible, MatchesNaiveFilterOnGeneratedInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GeneratorConfig cfg;
    cfg.n_students = 6;
    cfg.n_projects = 10 + seed % 6;
    cfg.n_supervisors = 3 + seed % 4;
    cfg.popularity_exponent = 0.8;
    cfg.workload_fractions = {0.5, 0.25, 1.0};
    cfg.seed = seed;
    const Dataset d = generate_dataset(cfg);

    auto pruned = enumerate_feasible(d);
    std::vector<Allocation> naive;
    spa::testing::naive_enumerate(d, [&](const Allocation& a) { naive.push_back(a); });
    std::sort(pruned.begin(), pruned.end());
    std::sort(naive.begin(), naive.end());
    EXPECT_EQ(pruned, naive) << "seed " << seed;
    for (const auto& a : pruned) EXPECT_TRUE(is_feasible(d, a).feasible);
  }
}

TEST(EnumerateFeasible, RefusesLargeInstances) {
  try {
    enumerate_feasible(spa::testing::disjoint_dataset(12));  // 4^12 > 10^7
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InstanceTooLarge);
  }
  EXPECT_EQ(enumerate_feasible(spa::testing::disjoint_dataset(3), 64).size(), 64u);
}

TEST(ExactMinimum, DisjointInstanceIsAllFirstChoices) {
  const Dataset d = spa::testing::disjoint_dataset(3);
  const auto r = exact_minimum(d, WeightScheme::linear());
  EXPECT_EQ(r.degeneracy(), 1u);
  EXPECT_EQ(r.optima.front(), (Allocation{{0, 4, 8}}));
  EXPECT_DOUBLE_EQ(r.minimum_raw, -12.0);
  EXPECT_EQ(r.minimum_normalized, -100.0);
  EXPECT_EQ(r.feasible_count, 64u);
}

TEST(ExactMinimum, PigeonholeIsInfeasible) {
  const Dataset d = make_dataset({{0}, {0}}, 1, 1.0, 1);
  try {
    exact_minimum(d, WeightScheme::linear());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(ExactMinimum, AgreesWithNaiveMinimum) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    GeneratorConfig cfg;
    cfg.n_students = 3 + seed % 4;
    cfg.n_projects = 2 * cfg.n_students;
    cfg.n_supervisors = cfg.n_students;
    cfg.popularity_exponent = 1.0;
    cfg.seed = seed;
    const Dataset d = generate_dataset(cfg);
    for (const auto& w : {WeightScheme::linear(), WeightScheme::opinion()}) {
      const auto naive = spa::testing::naive_minimum(d, w.values());
      if (naive.feasible == 0) {
        EXPECT_THROW(exact_minimum(d, w), Error);
        continue;
      }
      const auto r = exact_minimum(d, w);
      EXPECT_NEAR(r.minimum_raw, naive.energy, 1e-9);
      EXPECT_EQ(r.optima, naive.optima);
      EXPECT_EQ(r.feasible_count, naive.feasible);
    }
  }
}

TEST(ExactMinimum, OpinionWeightsLiftTheFixtureDegeneracy) {
  const Dataset d = spa::testing::degeneracy_fixture();
  const auto linear = exact_minimum(d, WeightScheme::linear());
  const auto opinion = exact_minimum(d, WeightScheme::opinion());

  // Frozen from the naive enumeration (see naive_minimum).
  EXPECT_DOUBLE_EQ(linear.minimum_raw, -10.0);
  ASSERT_EQ(linear.degeneracy(), 4u);
  std::set<AllocationHistogram> histograms;
  for (const auto& a : linear.optima) histograms.insert(histogram_of(d, a));
  EXPECT_EQ(histograms.size(), 2u);

  EXPECT_NEAR(opinion.minimum_raw, -13.0, 1e-12);
  EXPECT_EQ(opinion.degeneracy(), 2u);
  for (const auto& a : opinion.optima) {
    EXPECT_EQ(histogram_of(d, a).counts, (std::vector<std::size_t>{1, 2, 0, 0}));
    EXPECT_NE(std::find(linear.optima.begin(), linear.optima.end(), a), linear.optima.end());
  }

  const auto naive = spa::testing::naive_minimum(d, WeightScheme::linear().values());
  EXPECT_EQ(naive.optima, linear.optima);
}

TEST(ExactMinimum, OptimaAreFeasibleAndCountBoundsThem) {
  GeneratorConfig cfg;
  cfg.n_students = 7;
  cfg.n_projects = 14;
  cfg.n_supervisors = 7;
  cfg.popularity_exponent = 1.2;
  cfg.seed = 4;
  const Dataset d = generate_dataset(cfg);
  const auto r = exact_minimum(d, WeightScheme::linear());
  EXPECT_GE(r.feasible_count, r.degeneracy());
  for (const auto& a : r.optima) {
    EXPECT_TRUE(is_feasible(d, a).feasible);
    EXPECT_DOUBLE_EQ(energy_of(d, a, WeightScheme::linear()).raw, r.minimum_raw);
  }
}
