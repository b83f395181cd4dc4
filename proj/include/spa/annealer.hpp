#ifndef SPA_ANNEALER_HPP
#define SPA_ANNEALER_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spa/model.hpp"
#include "spa/objective.hpp"
#include "spa/rng.hpp"

namespace spa {

/// Linear cooling schedule. Temperatures are in units of k_B.
struct Schedule {
  double t_start = 5.0;
  double t_end = 0.0;
  double t_step = 0.001;
  std::size_t attempted_budget_factor = 1000;
  std::size_t success_budget_factor = 100;
  std::size_t hard_cap_factor = 10000;

  void validate() const {
    if (!(t_start >= t_end && t_end >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "schedule needs t_start >= t_end >= 0");
    if (!(t_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "schedule needs t_step > 0");
    if (attempted_budget_factor < 1 || success_budget_factor < 1 || hard_cap_factor < 1)
      throw Error(ErrorCode::InvalidArgument, "schedule budget factors must be >= 1");
  }

  /// Number of temperature levels, including both end points.
  std::size_t levels() const {
    const double span = (t_start - t_end) / t_step;
    return static_cast<std::size_t>(std::ceil(span - 1e-9)) + 1;
  }

  /// Temperature of level i. Computed from the integer index so that 5001
  /// levels do not accumulate drift; the last level is exactly t_end.
  double temperature(std::size_t i) const {
    if (i + 1 >= levels()) return t_end;
    return t_start - static_cast<double>(i) * t_step;
  }
};

enum class MoveOutcome {
  Accepted,
  RejectedConflict,
  RejectedOverload,
  RejectedMetropolis,
  /// The chosen student has a single choice, so no trial allocation exists.
  NoAlternative,
};

struct MoveCounters {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_conflict = 0;
  std::uint64_t rejected_overload = 0;
  std::uint64_t rejected_metropolis = 0;
  std::uint64_t no_alternative = 0;

  void record(MoveOutcome outcome) {
    ++attempted;
    switch (outcome) {
      case MoveOutcome::Accepted: ++accepted; break;
      case MoveOutcome::RejectedConflict: ++rejected_conflict; break;
      case MoveOutcome::RejectedOverload: ++rejected_overload; break;
      case MoveOutcome::RejectedMetropolis: ++rejected_metropolis; break;
      case MoveOutcome::NoAlternative: ++no_alternative; break;
    }
  }

  bool balanced() const {
    return attempted == accepted + rejected_conflict + rejected_overload + rejected_metropolis + no_alternative;
  }

  MoveCounters& operator+=(const MoveCounters& o) {
    attempted += o.attempted;
    accepted += o.accepted;
    rejected_conflict += o.rejected_conflict;
    rejected_overload += o.rejected_overload;
    rejected_metropolis += o.rejected_metropolis;
    no_alternative += o.no_alternative;
    return *this;
  }

  friend bool operator==(const MoveCounters&, const MoveCounters&) = default;
};

/// Metropolis rule: accept with probability min(1, exp(-delta/T)).
/// Non-positive deltas are accepted without consuming a random number; at
/// T = 0 any uphill move is rejected.
inline bool metropolis_accept(double delta, double temperature, Rng& rng) {
  if (delta <= 0.0) return true;
  if (temperature <= 0.0) return false;
  const double r = rng.uniform_open01();
  return std::exp(-delta / temperature) >= r;
}

/// A feasible allocation together with the bookkeeping needed to test and
/// apply single-student moves in O(supervisors per project).
class AnnealState {
 public:
  static constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();

  AnnealState(const Dataset& d, Allocation a, const WeightScheme& w)
      : data_(&d), allocation_(std::move(a)), scheme_(w) {
    const auto report = is_feasible(d, allocation_);
    if (!report) throw Error(ErrorCode::InfeasibleAllocation, "annealing needs a feasible starting allocation");
    if (w.size() < static_cast<std::size_t>(d.max_rank))
      throw Error(ErrorCode::RankOutOfRange, "dataset allows rank " + std::to_string(d.max_rank) + " but only " +
                                                 std::to_string(w.size()) + " weights given");
    weights_.assign(w.values().begin(), w.values().begin() + d.max_rank);
    rank_index_.resize(d.n_students);
    owner_.assign(d.n_projects, kFree);
    load_.assign(d.n_supervisors, 0.0);
    histogram_.counts.assign(static_cast<std::size_t>(d.max_rank), 0);
    for (StudentId i = 0; i < d.n_students; ++i) {
      const ProjectId p = allocation_[i];
      rank_index_[i] = static_cast<std::uint32_t>(d.rank_of(i, p) - 1);
      owner_[p] = i;
      for (const auto& sv : d.supervision[p]) load_[sv.supervisor] += sv.fraction;
      ++histogram_.counts[rank_index_[i]];
    }
  }

  const Dataset& dataset() const { return *data_; }
  const Allocation& allocation() const { return allocation_; }
  const AllocationHistogram& histogram() const { return histogram_; }
  const WeightScheme& weights() const { return scheme_; }

  /// 0-based rank index currently held by a student.
  std::uint32_t rank_index(StudentId i) const { return rank_index_[i]; }
  std::uint32_t owner(ProjectId p) const { return owner_[p]; }
  double load(SupervisorId s) const { return load_[s]; }
  double weight_index(std::uint32_t k) const { return weights_[k]; }

  /// Energy recomputed from the integer histogram; identical for identical
  /// allocations regardless of the move history that produced them.
  Energy energy() const {
    const double raw = energy_raw(histogram_, scheme_);
    return {raw, energy_normalized(histogram_, scheme_, data_->n_students)};
  }

  /// Whether moving `student` to `target` keeps every supervisor at or under unit load.
  bool fits_workload(StudentId student, ProjectId target) const {
    const ProjectId current = allocation_[student];
    for (const auto& sv : data_->supervision[target]) {
      double after = load_[sv.supervisor] + sv.fraction;
      for (const auto& old : data_->supervision[current]) {
        if (old.supervisor == sv.supervisor) after -= old.fraction;
      }
      if (after > 1.0 + kLoadTolerance) return false;
    }
    return true;
  }

  /// Reassigns `student` to their choice with 0-based index `k`. The caller
  /// is responsible for having checked conflict and workload.
  void apply(StudentId student, std::uint32_t k) {
    const auto& d = *data_;
    const ProjectId from = allocation_[student];
    const ProjectId to = d.choices[student][k];
    for (const auto& sv : d.supervision[from]) load_[sv.supervisor] -= sv.fraction;
    for (const auto& sv : d.supervision[to]) load_[sv.supervisor] += sv.fraction;
    owner_[from] = kFree;
    owner_[to] = student;
    --histogram_.counts[rank_index_[student]];
    ++histogram_.counts[k];
    rank_index_[student] = k;
    allocation_[student] = to;
#if !defined(NDEBUG)
    assert(is_feasible(d, allocation_).feasible);
#endif
  }

 private:
  const Dataset* data_;
  Allocation allocation_;
  WeightScheme scheme_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> rank_index_;
  std::vector<std::uint32_t> owner_;
  std::vector<double> load_;
  AllocationHistogram histogram_;
};

/// One Monte Carlo move: pick a student and a different rank uniformly,
/// reject on project conflict, then on supervisor overload, then apply the
/// Metropolis rule on the energy change.
inline MoveOutcome propose_and_decide(AnnealState& state, double temperature, Rng& rng) {
  const auto& d = state.dataset();
  const auto student = static_cast<StudentId>(rng.uniform_index(d.n_students));
  const auto& list = d.choices[student];
  if (list.size() < 2) return MoveOutcome::NoAlternative;

  const std::uint32_t current = state.rank_index(student);
  std::uint32_t k = current;
  while (k == current) k = static_cast<std::uint32_t>(rng.uniform_index(list.size()));

  const ProjectId target = list[k];
  if (state.owner(target) != AnnealState::kFree) return MoveOutcome::RejectedConflict;
  if (!state.fits_workload(student, target)) return MoveOutcome::RejectedOverload;

  const double delta = state.weight_index(current) - state.weight_index(k);
  if (!metropolis_accept(delta, temperature, rng)) return MoveOutcome::RejectedMetropolis;
  state.apply(student, k);
  return MoveOutcome::Accepted;
}

struct RepairOptions {
  /// Accept moves that leave the violation count unchanged. With false only
  /// strict reductions are accepted.
  bool accept_plateau = true;
  /// 0 selects max(10^6, 1000 * N * R).
  std::uint64_t max_iterations = 0;
};

struct RepairResult {
  Allocation allocation;
  std::uint64_t iterations = 0;
};

/// Random assignment followed by a violation-descent walk until the
/// allocation is feasible. Throws RepairTimeout when the iteration cap is hit.
inline RepairResult repair_initialize(const Dataset& d, Rng& rng, const RepairOptions& options = {}) {
  const std::size_t n = d.n_students;
  Allocation a{std::vector<ProjectId>(n)};
  for (StudentId i = 0; i < n; ++i) a[i] = d.choices[i][rng.uniform_index(d.choices[i].size())];

  std::vector<std::uint32_t> holders(d.n_projects, 0);
  std::vector<double> load(d.n_supervisors, 0.0);
  for (StudentId i = 0; i < n; ++i) {
    ++holders[a[i]];
    for (const auto& sv : d.supervision[a[i]]) load[sv.supervisor] += sv.fraction;
  }
  auto overloaded = [&](SupervisorId s) { return load[s] > 1.0 + kLoadTolerance; };

  std::int64_t violations = 0;
  for (ProjectId p = 0; p < d.n_projects; ++p) violations += holders[p] > 1 ? holders[p] - 1 : 0;
  for (SupervisorId s = 0; s < d.n_supervisors; ++s) violations += overloaded(s) ? 1 : 0;

  const std::uint64_t cap = options.max_iterations != 0
                                ? options.max_iterations
                                : std::max<std::uint64_t>(1'000'000, 1000ULL * n * static_cast<std::uint64_t>(d.max_rank));

  // Supervisors touched by a move; overload status is re-evaluated only for these.
  std::vector<SupervisorId> touched;
  auto overload_count = [&] {
    std::int64_t c = 0;
    for (auto s : touched) c += overloaded(s) ? 1 : 0;
    return c;
  };
  auto move = [&](StudentId i, ProjectId from, ProjectId to) {
    --holders[from];
    ++holders[to];
    for (const auto& sv : d.supervision[from]) load[sv.supervisor] -= sv.fraction;
    for (const auto& sv : d.supervision[to]) load[sv.supervisor] += sv.fraction;
    a[i] = to;
  };

  std::uint64_t it = 0;
  while (violations > 0) {
    if (it >= cap)
      throw Error(ErrorCode::RepairTimeout, "no feasible allocation after " + std::to_string(cap) +
                                                " repair iterations (" + std::to_string(violations) +
                                                " violation(s) remain)");
    ++it;
    const auto i = static_cast<StudentId>(rng.uniform_index(n));
    const ProjectId from = a[i];
    const ProjectId to = d.choices[i][rng.uniform_index(d.choices[i].size())];
    if (to == from) continue;

    touched.clear();
    for (const auto& sv : d.supervision[from]) touched.push_back(sv.supervisor);
    for (const auto& sv : d.supervision[to]) touched.push_back(sv.supervisor);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    const std::int64_t before_overloads = overload_count();
    std::int64_t delta = 0;
    delta -= holders[from] > 1 ? 1 : 0;
    delta += holders[to] >= 1 ? 1 : 0;
    move(i, from, to);
    delta += overload_count() - before_overloads;

    const bool accept = options.accept_plateau ? delta <= 0 : delta < 0;
    if (accept) {
      violations += delta;
    } else {
      move(i, to, from);
    }
  }
  return {std::move(a), it};
}

struct TimeSample {
  double temperature = 0.0;
  double energy = 0.0;

  friend bool operator==(const TimeSample&, const TimeSample&) = default;
};

struct RunResult {
  Allocation allocation;
  Energy initial_energy;
  Energy energy;
  AllocationHistogram histogram;
  /// One sample per temperature level: the raw energy at the end of that level.
  std::vector<TimeSample> series;
  MoveCounters counters;
  std::uint64_t seed = 0;
  std::uint64_t repair_iterations = 0;
};

struct AnnealOptions {
  RepairOptions repair;
  bool record_series = true;
  /// Called after each temperature level with (level, temperature, state).
  std::function<void(std::size_t, double, const AnnealState&)> on_level;
};

/// Full annealing run: repair initialisation, then for each temperature keep
/// making moves until both the attempted (factor * N) and successful
/// (factor * N) budgets are met, or the hard cap of attempted moves is hit.
inline RunResult anneal(const Dataset& d, const WeightScheme& w, const Schedule& s, std::uint64_t seed,
                        const AnnealOptions& options = {}) {
  s.validate();
  Rng rng(seed);
  RepairResult init = repair_initialize(d, rng, options.repair);

  RunResult result;
  result.seed = seed;
  result.repair_iterations = init.iterations;
  AnnealState state(d, std::move(init.allocation), w);
  result.initial_energy = state.energy();

  const std::uint64_t n = d.n_students;
  const std::uint64_t attempted_budget = s.attempted_budget_factor * n;
  const std::uint64_t success_budget = s.success_budget_factor * n;
  const std::uint64_t hard_cap = s.hard_cap_factor * n;

  const std::size_t levels = s.levels();
  if (options.record_series) result.series.reserve(levels);
  for (std::size_t level = 0; level < levels; ++level) {
    const double t = s.temperature(level);
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    while ((attempted < attempted_budget || accepted < success_budget) && attempted < hard_cap) {
      const MoveOutcome outcome = propose_and_decide(state, t, rng);
      result.counters.record(outcome);
      ++attempted;
      if (outcome == MoveOutcome::Accepted) ++accepted;
    }
    if (options.record_series) result.series.push_back({t, state.energy().raw});
    if (options.on_level) options.on_level(level, t, state);
  }

  result.allocation = state.allocation();
  if (!is_feasible(d, result.allocation))
    throw Error(ErrorCode::InfeasibleAllocation, "annealing produced an infeasible allocation");
  result.histogram = histogram_of(d, result.allocation);
  result.energy = {energy_raw(result.histogram, w), energy_normalized(result.histogram, w, d.n_students)};
  return result;
}

}  // namespace spa

#endif  // SPA_ANNEALER_HPP
