#include <gtest/gtest.h>

#include <random>

#include "spa/annealer.hpp"
#include "spa/objective.hpp"
#include "spa/oracle.hpp"
#include "test_support.hpp"

using namespace spa;

namespace {
AllocationHistogram hist(std::vector<std::size_t> c) { return AllocationHistogram{std::move(c)}; }
}  // namespace

TEST(EnergyRaw, LinearAllFirstChoices) {
  EXPECT_DOUBLE_EQ(energy_raw(hist({10, 0, 0, 0}), WeightScheme::linear()), -40.0);
}

TEST(EnergyRaw, LinearAllFourthChoices) {
  EXPECT_DOUBLE_EQ(energy_raw(hist({0, 0, 0, 10}), WeightScheme::linear()), -10.0);
}

TEST(EnergyRaw, LinearOneOfEach) {
  // 4 + 3 + 2 + 1
  EXPECT_DOUBLE_EQ(energy_raw(hist({1, 1, 1, 1}), WeightScheme::linear()), -10.0);
}

TEST(EnergyRaw, RankBeyondWeights) {
  try {
    energy_raw(hist({1, 0, 0, 0, 1}), WeightScheme::linear());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankOutOfRange);
  }
  // Empty trailing ranks are harmless.
  EXPECT_DOUBLE_EQ(energy_raw(hist({2, 0, 0, 0, 0}), WeightScheme::linear()), -8.0);
}

TEST(EnergyNormalized, AllFirstChoicesIsMinusHundred) {
  for (const auto& w : {WeightScheme::linear(), WeightScheme::opinion(), WeightScheme({9.0, 1.0})}) {
    for (std::size_t n : {1u, 7u, 26u, 1000u}) {
      std::vector<std::size_t> c(w.size(), 0);
      c[0] = n;
      EXPECT_EQ(energy_normalized(hist(c), w, n), -100.0);
    }
  }
}

TEST(EnergyNormalized, LinearAllFourthIsMinusTwentyFive) {
  EXPECT_DOUBLE_EQ(energy_normalized(hist({0, 0, 0, 8}), WeightScheme::linear(), 8), -25.0);
}

TEST(EnergyNormalized, OpinionAllSecond) {
  // 100 * 4.15 / 4.7
  EXPECT_NEAR(energy_normalized(hist({0, 12, 0, 0}), WeightScheme::opinion(), 12), -88.29787234042553, 1e-12);
}

TEST(EnergyNormalized, MatchesRawScaling) {
  const auto w = WeightScheme::opinion();
  const auto h = hist({3, 5, 2, 1});
  EXPECT_NEAR(energy_normalized(h, w, 11), normalize_energy(energy_raw(h, w), w, 11), 1e-12);
}

TEST(EnergyNormalized, EmptyCohort) {
  try {
    energy_normalized(hist({0, 0, 0, 0}), WeightScheme::linear(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCohort);
  }
}

TEST(DeltaEnergy, LinearExamples) {
  const Dataset d = spa::testing::disjoint_dataset(1);
  const auto w = WeightScheme::linear();
  EXPECT_DOUBLE_EQ(delta_energy(d, Allocation{{0}}, 0, 4, w), 3.0);
  EXPECT_DOUBLE_EQ(delta_energy(d, Allocation{{2}}, 0, 1, w), -2.0);
}

TEST(DeltaEnergy, SameRankIsAnError) {
  const Dataset d = spa::testing::disjoint_dataset(1);
  try {
    delta_energy(d, Allocation{{1}}, 0, 2, WeightScheme::linear());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SameRank);
  }
}

TEST(DeltaEnergy, TelescopesOverRandomMoveSequences) {
  std::mt19937 gen(5);
  const auto w = WeightScheme::opinion();
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = spa::testing::disjoint_dataset(6);
    Allocation a{std::vector<ProjectId>(6)};
    for (StudentId i = 0; i < 6; ++i) a[i] = d.choices[i][gen() % 4];
    const double start = energy_of(d, a, w).raw;
    double sum = 0.0;
    for (int step = 0; step < 500; ++step) {
      const StudentId i = gen() % 6;
      const Rank current = d.rank_of(i, a[i]);
      Rank next = current;
      while (next == current) next = 1 + static_cast<Rank>(gen() % 4);
      const double before = energy_of(d, a, w).raw;
      const double delta = delta_energy(d, a, i, next, w);
      a[i] = d.choices[i][static_cast<std::size_t>(next - 1)];
      EXPECT_NEAR(energy_of(d, a, w).raw, before + delta, 1e-9);
      sum += delta;
    }
    EXPECT_NEAR(energy_of(d, a, w).raw - start, sum, 1e-9);
  }
}

TEST(EnergyProperties, UpgradingAStudentStrictlyLowersEnergy) {
  std::mt19937 gen(9);
  for (const auto& w : {WeightScheme::linear(), WeightScheme::opinion()}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::size_t> c(4);
      for (auto& x : c) x = gen() % 5;
      std::size_t from = 1 + gen() % 3;
      if (c[from] == 0) c[from] = 1;
      const std::size_t to = gen() % from;
      const double before = energy_raw(hist(c), w);
      --c[from];
      ++c[to];
      EXPECT_LT(energy_raw(hist(c), w), before);
    }
  }
}

TEST(EnergyProperties, ScalingWeightsKeepsTheOptimalSet) {
  const auto generate = [](std::mt19937& gen) {
    std::vector<std::vector<ProjectId>> choices(5);
    for (auto& list : choices) {
      std::vector<ProjectId> pool{0, 1, 2, 3, 4, 5, 6, 7};
      std::shuffle(pool.begin(), pool.end(), gen);
      list.assign(pool.begin(), pool.begin() + 4);
    }
    return spa::testing::make_dataset(choices, 8, 1.0);
  };
  std::mt19937 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Dataset d = generate(gen);
    for (const auto& w : {WeightScheme::linear(), WeightScheme::opinion()}) {
      const auto base = exact_minimum(d, w);
      for (double c : {0.01, 0.5, 3.0, 1000.0}) {
        const auto scaled = exact_minimum(d, w.scaled(c));
        EXPECT_EQ(scaled.optima, base.optima) << "scale " << c;
      }
    }
  }
}
