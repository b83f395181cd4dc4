#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "spa/model.hpp"
#include "test_support.hpp"

using namespace spa;
using spa::testing::make_dataset;

namespace {

Dataset raw_two_students() {
  Dataset d;
  d.n_students = 2;
  d.n_projects = 8;
  d.n_supervisors = 4;
  d.choices = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  d.supervision.resize(8);
  for (ProjectId p = 0; p < 8; ++p) d.supervision[p] = {{p / 2, 0.5}};
  return d;
}

ErrorCode code_of(const Dataset& d) {
  try {
    validate_dataset(d);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected validation failure";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(ValidateDataset, AcceptsWellFormedMinimalCase) {
  const Dataset d = validate_dataset(raw_two_students());
  EXPECT_EQ(d.n_students, 2u);
  EXPECT_EQ(d.labels.students, (std::vector<std::string>{"S0", "S1"}));
  EXPECT_EQ(d.labels.projects.size(), 8u);
  EXPECT_EQ(d.labels.supervisors.front(), "Sup0");
  EXPECT_DOUBLE_EQ(d.workload(3, 1), 0.5);
  EXPECT_DOUBLE_EQ(d.workload(3, 0), 0.0);
}

TEST(ValidateDataset, RejectsDuplicateChoice) {
  Dataset d = raw_two_students();
  d.choices[0] = {3, 1, 3, 2};
  EXPECT_EQ(code_of(d), ErrorCode::DuplicateChoice);
  try {
    validate_dataset(d);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("student 0"), std::string::npos);
  }
}

TEST(ValidateDataset, RejectsWorkloadOutOfRange) {
  Dataset d = raw_two_students();
  d.supervision[5] = {{2, 1.5}};
  EXPECT_EQ(code_of(d), ErrorCode::WorkloadOutOfRange);
  d.supervision[5] = {{2, -0.1}};
  EXPECT_EQ(code_of(d), ErrorCode::WorkloadOutOfRange);
}

TEST(ValidateDataset, RejectsUnknownReferencesAndOrphans) {
  Dataset d = raw_two_students();
  d.choices[1][2] = 8;
  EXPECT_EQ(code_of(d), ErrorCode::UnknownProject);

  d = raw_two_students();
  d.supervision[0] = {{9, 0.5}};
  EXPECT_EQ(code_of(d), ErrorCode::UnknownSupervisor);

  d = raw_two_students();
  d.supervision[6].clear();
  EXPECT_EQ(code_of(d), ErrorCode::OrphanProject);

  // A zero fraction is "not a supervisor".
  d = raw_two_students();
  d.supervision[6] = {{3, 0.0}};
  EXPECT_EQ(code_of(d), ErrorCode::OrphanProject);
}

TEST(ValidateDataset, RejectsEmptyAndOverlongLists) {
  Dataset d = raw_two_students();
  d.choices[1].clear();
  EXPECT_EQ(code_of(d), ErrorCode::EmptyChoiceList);

  d = raw_two_students();
  d.max_rank = 3;
  EXPECT_EQ(code_of(d), ErrorCode::TooManyChoices);

  d = raw_two_students();
  d.n_students = 0;
  d.choices.clear();
  EXPECT_EQ(code_of(d), ErrorCode::EmptyCohort);
}

TEST(IsFeasible, DetectsProjectConflict) {
  const Dataset d = make_dataset({{0, 1}, {0, 2}}, 3, 0.5);
  const auto r = is_feasible(d, Allocation{{0, 0}});
  EXPECT_FALSE(r.feasible);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::ProjectConflict);
  EXPECT_EQ(r.violations[0].index, 0u);
  EXPECT_TRUE(is_feasible(d, Allocation{{0, 2}}).feasible);
}

TEST(IsFeasible, TwoHalfLoadsFitOneSupervisor) {
  Dataset d = make_dataset({{0, 3}, {1, 3}, {2, 3}}, 4);
  d = spa::testing::with_supervisors(d, 2, {{0, 0.5}, {0, 0.5}, {0, 0.5}, {1, 0.5}});
  EXPECT_TRUE(is_feasible(d, Allocation{{0, 1, 3}}).feasible);
}

TEST(IsFeasible, ThreeHalfLoadsOverloadOneSupervisor) {
  Dataset d = make_dataset({{0, 3}, {1, 3}, {2, 3}}, 4);
  d = spa::testing::with_supervisors(d, 2, {{0, 0.5}, {0, 0.5}, {0, 0.5}, {1, 0.5}});
  const auto r = is_feasible(d, Allocation{{0, 1, 2}});
  EXPECT_FALSE(r.feasible);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::SupervisorOverload);
  EXPECT_EQ(r.violations[0].index, 0u);
  EXPECT_DOUBLE_EQ(r.violations[0].amount, 1.5);
}

TEST(IsFeasible, ThirdsSumToExactlyOne) {
  Dataset d = make_dataset({{0}, {1}, {2}}, 3);
  const double third = 1.0 / 3.0;
  d = spa::testing::with_supervisors(d, 1, {{0, third}, {0, third}, {0, third}});
  EXPECT_TRUE(is_feasible(d, Allocation{{0, 1, 2}}).feasible);
}

TEST(IsFeasible, ReportsUnlistedProjectAndWrongLength) {
  const Dataset d = make_dataset({{0, 1}, {2, 3}}, 4);
  auto r = is_feasible(d, Allocation{{0, 1}});
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::UnlistedProject);
  EXPECT_EQ(r.violations[0].index, 1u);

  r = is_feasible(d, Allocation{{0}});
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::WrongLength);
}

TEST(IsFeasible, IsPure) {
  const Dataset d = make_dataset({{0, 1}, {0, 1}, {0, 1}}, 2);
  const Allocation a{{0, 0, 1}};
  const auto first = is_feasible(d, a);
  for (int k = 0; k < 5; ++k) {
    const auto again = is_feasible(d, a);
    EXPECT_EQ(again.feasible, first.feasible);
    EXPECT_EQ(again.violations, first.violations);
  }
}

TEST(Histogram, AllFirstChoices) {
  const Dataset d = spa::testing::disjoint_dataset(5);
  const Allocation a{{0, 4, 8, 12, 16}};
  EXPECT_EQ(histogram_of(d, a).counts, (std::vector<std::size_t>{5, 0, 0, 0}));
}

TEST(Histogram, MixedRanks) {
  const Dataset d = spa::testing::disjoint_dataset(2);
  EXPECT_EQ(histogram_of(d, Allocation{{0, 6}}).counts, (std::vector<std::size_t>{1, 0, 1, 0}));
}

TEST(Histogram, RejectsInfeasible) {
  const Dataset d = make_dataset({{0, 1}, {0, 1}}, 2);
  try {
    histogram_of(d, Allocation{{0, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleAllocation);
  }
}

TEST(Histogram, PropertySumsToNAndIgnoresStudentOrder) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 6;
    const Dataset d = spa::testing::disjoint_dataset(n);
    Allocation a{std::vector<ProjectId>(n)};
    for (StudentId i = 0; i < n; ++i) a[i] = d.choices[i][gen() % 4];
    const auto h = histogram_of(d, a);
    EXPECT_EQ(h.total(), n);

    // Relabel students by a random permutation; the rank multiset is unchanged.
    std::vector<StudentId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    Dataset permuted = d;
    Allocation pa = a;
    for (StudentId i = 0; i < n; ++i) {
      permuted.choices[i] = d.choices[perm[i]];
      pa[i] = a[perm[i]];
    }
    EXPECT_EQ(histogram_of(permuted, pa), h);
  }
}

TEST(WeightScheme, BuiltinsAndValidation) {
  EXPECT_EQ(WeightScheme::linear().values(), (std::vector<double>{4, 3, 2, 1}));
  EXPECT_EQ(WeightScheme::opinion().values(), (std::vector<double>{4.7, 4.15, 3.0, 2.35}));
  EXPECT_EQ(WeightScheme::linear(3).values(), (std::vector<double>{3, 2, 1}));
  EXPECT_THROW(WeightScheme({3.0, 3.0}), Error);
  EXPECT_THROW(WeightScheme({3.0, 4.0}), Error);
  EXPECT_THROW(WeightScheme({1.0, 0.0}), Error);
  EXPECT_THROW(WeightScheme(std::vector<double>{}), Error);
  EXPECT_THROW(WeightScheme::linear()(5), Error);
}
