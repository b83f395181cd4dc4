#ifndef SPA_MODEL_HPP
#define SPA_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "spa/error.hpp"

namespace spa {

using StudentId = std::uint32_t;
using ProjectId = std::uint32_t;
using SupervisorId = std::uint32_t;

/// 1-based preference rank: 1 is a student's first choice.
using Rank = int;

inline constexpr int kDefaultMaxRank = 4;

/// Slack applied to fractional supervisor loads. Fractions such as 1/3 are
/// not exact in binary, so "sum <= 1" is tested as "sum <= 1 + kLoadTolerance".
inline constexpr double kLoadTolerance = 1e-9;

struct Supervision {
  SupervisorId supervisor = 0;
  double fraction = 0.0;

  friend bool operator==(const Supervision&, const Supervision&) = default;
};

struct Labels {
  std::vector<std::string> students;
  std::vector<std::string> projects;
  std::vector<std::string> supervisors;

  friend bool operator==(const Labels&, const Labels&) = default;
};

/// A student-project allocation instance.
///
/// Preferences are kept as ordered choice lists (choices[i][k] is student i's
/// rank k+1 project). Workloads are sparse: supervision[j] lists every
/// supervisor of project j with a positive fraction. A supervisor with an
/// integer limit L is modelled by giving each of their projects fraction 1/L.
struct Dataset {
  std::size_t n_students = 0;
  std::size_t n_projects = 0;
  std::size_t n_supervisors = 0;
  int max_rank = kDefaultMaxRank;
  std::vector<std::vector<ProjectId>> choices;
  std::vector<std::vector<Supervision>> supervision;
  Labels labels;

  /// Workload fraction of project p for supervisor s (0 when s does not supervise p).
  double workload(ProjectId p, SupervisorId s) const {
    for (const auto& sv : supervision.at(p)) {
      if (sv.supervisor == s) return sv.fraction;
    }
    return 0.0;
  }

  /// 1-based rank of project p in student i's list, or 0 if not listed.
  Rank rank_of(StudentId i, ProjectId p) const {
    const auto& list = choices.at(i);
    auto it = std::find(list.begin(), list.end(), p);
    return it == list.end() ? 0 : static_cast<Rank>(it - list.begin()) + 1;
  }

  const std::string& student_label(StudentId i) const { return labels.students.at(i); }
  const std::string& project_label(ProjectId p) const { return labels.projects.at(p); }
  const std::string& supervisor_label(SupervisorId s) const { return labels.supervisors.at(s); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline std::vector<std::string> synthetic_labels(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Fills any missing label vector with S0.., P0.., Sup0.. names.
inline void ensure_labels(Dataset& d) {
  if (d.labels.students.size() != d.n_students) d.labels.students = synthetic_labels("S", d.n_students);
  if (d.labels.projects.size() != d.n_projects) d.labels.projects = synthetic_labels("P", d.n_projects);
  if (d.labels.supervisors.size() != d.n_supervisors)
    d.labels.supervisors = synthetic_labels("Sup", d.n_supervisors);
}

/// Checks every structural invariant of a dataset and returns it (with labels
/// filled in) or throws an Error naming the offending student/project.
inline Dataset validate_dataset(Dataset raw) {
  auto fail = [](ErrorCode code, const std::string& msg) { throw Error(code, msg); };
  if (raw.n_students == 0) fail(ErrorCode::EmptyCohort, "dataset has no students");
  if (raw.n_projects == 0) fail(ErrorCode::InvalidArgument, "dataset has no projects");
  if (raw.max_rank < 1) fail(ErrorCode::InvalidArgument, "max_rank must be at least 1");
  if (raw.choices.size() != raw.n_students)
    fail(ErrorCode::InvalidArgument, "choice lists: expected " + std::to_string(raw.n_students) +
                                         ", got " + std::to_string(raw.choices.size()));
  if (raw.supervision.size() != raw.n_projects)
    fail(ErrorCode::InvalidArgument, "supervision rows: expected " + std::to_string(raw.n_projects) +
                                         ", got " + std::to_string(raw.supervision.size()));

  for (std::size_t i = 0; i < raw.n_students; ++i) {
    const auto& list = raw.choices[i];
    const std::string who = "student " + std::to_string(i);
    if (list.empty()) fail(ErrorCode::EmptyChoiceList, who + " has no choices");
    if (list.size() > static_cast<std::size_t>(raw.max_rank))
      fail(ErrorCode::TooManyChoices, who + " lists " + std::to_string(list.size()) +
                                          " projects, max_rank is " + std::to_string(raw.max_rank));
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] >= raw.n_projects)
        fail(ErrorCode::UnknownProject, who + " rank " + std::to_string(k + 1) + " refers to project " +
                                            std::to_string(list[k]));
      for (std::size_t q = 0; q < k; ++q) {
        if (list[q] == list[k])
          fail(ErrorCode::DuplicateChoice, who + " lists project " + std::to_string(list[k]) + " twice");
      }
    }
  }

  for (std::size_t p = 0; p < raw.n_projects; ++p) {
    const std::string what = "project " + std::to_string(p);
    bool supervised = false;
    for (const auto& sv : raw.supervision[p]) {
      if (sv.supervisor >= raw.n_supervisors)
        fail(ErrorCode::UnknownSupervisor, what + " refers to supervisor " + std::to_string(sv.supervisor));
      if (!(sv.fraction >= 0.0 && sv.fraction <= 1.0))
        fail(ErrorCode::WorkloadOutOfRange, what + " supervisor " + std::to_string(sv.supervisor) +
                                                " workload " + std::to_string(sv.fraction));
      if (sv.fraction > 0.0) supervised = true;
    }
    if (!supervised) fail(ErrorCode::OrphanProject, what + " has no supervisor with positive workload");
  }

  // Zero-fraction entries carry no constraint; drop them so the sparse lists
  // only hold real supervision.
  for (auto& row : raw.supervision) {
    std::erase_if(row, [](const Supervision& sv) { return sv.fraction <= 0.0; });
  }

  ensure_labels(raw);
  if (raw.labels.students.size() != raw.n_students || raw.labels.projects.size() != raw.n_projects ||
      raw.labels.supervisors.size() != raw.n_supervisors)
    fail(ErrorCode::InvalidArgument, "label vectors do not match entity counts");
  return raw;
}

/// One project per student (the dense form of the allocation matrix X).
struct Allocation {
  std::vector<ProjectId> assignment;

  std::size_t size() const { return assignment.size(); }
  ProjectId operator[](StudentId i) const { return assignment[i]; }
  ProjectId& operator[](StudentId i) { return assignment[i]; }

  friend bool operator==(const Allocation&, const Allocation&) = default;
  friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

enum class ViolationKind {
  /// Allocation length differs from the number of students.
  WrongLength,
  /// Student assigned a project outside their choice list.
  UnlistedProject,
  /// Project assigned to more than one student.
  ProjectConflict,
  /// Supervisor's summed workload fractions exceed 1.
  SupervisorOverload,
};

struct Violation {
  ViolationKind kind;
  /// Student for UnlistedProject, project for ProjectConflict, supervisor for SupervisorOverload.
  std::size_t index;
  /// Conflict: number of students holding the project. Overload: the summed load.
  double amount = 0.0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;

  explicit operator bool() const { return feasible; }
};

inline FeasibilityReport is_feasible(const Dataset& d, const Allocation& a) {
  FeasibilityReport report;
  auto add = [&](Violation v) {
    report.feasible = false;
    report.violations.push_back(v);
  };
  if (a.size() != d.n_students) {
    add({ViolationKind::WrongLength, a.size(), static_cast<double>(d.n_students)});
    return report;
  }

  std::vector<std::size_t> holders(d.n_projects, 0);
  for (StudentId i = 0; i < d.n_students; ++i) {
    const ProjectId p = a[i];
    if (p >= d.n_projects || d.rank_of(i, p) == 0) {
      add({ViolationKind::UnlistedProject, i, static_cast<double>(p)});
      continue;
    }
    ++holders[p];
  }

  std::vector<double> load(d.n_supervisors, 0.0);
  for (ProjectId p = 0; p < d.n_projects; ++p) {
    if (holders[p] > 1) add({ViolationKind::ProjectConflict, p, static_cast<double>(holders[p])});
    if (holders[p] == 0) continue;
    for (const auto& sv : d.supervision[p]) load[sv.supervisor] += sv.fraction * static_cast<double>(holders[p]);
  }
  for (SupervisorId s = 0; s < d.n_supervisors; ++s) {
    if (load[s] > 1.0 + kLoadTolerance) add({ViolationKind::SupervisorOverload, s, load[s]});
  }
  return report;
}

/// Strictly decreasing positive per-rank weights w_1 > w_2 > ... > 0.
class WeightScheme {
 public:
  explicit WeightScheme(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "weight scheme is empty");
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      if (!(weights_[k] > 0.0))
        throw Error(ErrorCode::InvalidArgument, "weight " + std::to_string(k + 1) + " is not positive");
      if (k > 0 && !(weights_[k - 1] > weights_[k]))
        throw Error(ErrorCode::InvalidArgument, "weights must be strictly decreasing");
    }
  }

  /// (4, 3, 2, 1).
  static WeightScheme linear() { return WeightScheme({4.0, 3.0, 2.0, 1.0}); }
  /// (R, R-1, ..., 1) for an arbitrary number of ranks.
  static WeightScheme linear(int ranks) {
    std::vector<double> w(static_cast<std::size_t>(std::max(ranks, 0)));
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = static_cast<double>(w.size() - k);
    return WeightScheme(std::move(w));
  }
  /// Survey-derived satisfaction weights.
  static WeightScheme opinion() { return WeightScheme({4.7, 4.15, 3.0, 2.35}); }

  std::size_t size() const { return weights_.size(); }
  /// Weight of a 1-based rank.
  double operator()(Rank rank) const {
    if (rank < 1 || static_cast<std::size_t>(rank) > weights_.size())
      throw Error(ErrorCode::RankOutOfRange, "rank " + std::to_string(rank) + " has no weight");
    return weights_[static_cast<std::size_t>(rank - 1)];
  }
  double first() const { return weights_.front(); }
  const std::vector<double>& values() const { return weights_; }

  WeightScheme scaled(double c) const {
    std::vector<double> w = weights_;
    for (auto& x : w) x *= c;
    return WeightScheme(std::move(w));
  }

  friend bool operator==(const WeightScheme&, const WeightScheme&) = default;

 private:
  std::vector<double> weights_;
};

/// counts[k] = number of students holding their (k+1)-th choice.
struct AllocationHistogram {
  std::vector<std::size_t> counts;

  std::size_t total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }
  std::size_t operator[](std::size_t k) const { return counts[k]; }

  friend bool operator==(const AllocationHistogram&, const AllocationHistogram&) = default;
  friend auto operator<=>(const AllocationHistogram&, const AllocationHistogram&) = default;
};

inline AllocationHistogram histogram_of(const Dataset& d, const Allocation& a) {
  const auto report = is_feasible(d, a);
  if (!report) throw Error(ErrorCode::InfeasibleAllocation, std::to_string(report.violations.size()) + " violation(s)");
  AllocationHistogram h{std::vector<std::size_t>(static_cast<std::size_t>(d.max_rank), 0)};
  for (StudentId i = 0; i < d.n_students; ++i) ++h.counts[static_cast<std::size_t>(d.rank_of(i, a[i]) - 1)];
  return h;
}

}  // namespace spa

#endif  // SPA_MODEL_HPP
