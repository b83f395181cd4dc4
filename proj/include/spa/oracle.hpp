#ifndef SPA_ORACLE_HPP
#define SPA_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spa/model.hpp"
#include "spa/objective.hpp"

namespace spa {

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

/// Energies closer than this are treated as equal when collecting optima.
inline constexpr double kEnergyTolerance = 1e-9;

/// Product of choice-list lengths (the unpruned search-space size), saturating
/// at UINT64_MAX.
inline std::uint64_t candidate_count(const Dataset& d) {
  std::uint64_t total = 1;
  for (const auto& list : d.choices) {
    const std::uint64_t len = list.size();
    if (len != 0 && total > UINT64_MAX / len) return UINT64_MAX;
    total *= len;
  }
  return total;
}

/// Visits every feasible allocation exactly once by depth-first assignment,
/// pruning on project conflicts and supervisor overload. Students with the
/// fewest choices are placed first.
inline void for_each_feasible(const Dataset& d, const std::function<void(const Allocation&)>& visit,
                              std::uint64_t cap = kDefaultOracleCap) {
  const std::uint64_t candidates = candidate_count(d);
  if (candidates > cap)
    throw Error(ErrorCode::InstanceTooLarge, std::to_string(candidates) + " candidate assignments exceed the cap of " +
                                                 std::to_string(cap));

  std::vector<StudentId> order(d.n_students);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](StudentId a, StudentId b) { return d.choices[a].size() < d.choices[b].size(); });

  Allocation current{std::vector<ProjectId>(d.n_students, 0)};
  std::vector<char> taken(d.n_projects, 0);
  std::vector<double> load(d.n_supervisors, 0.0);

  std::function<void(std::size_t)> place = [&](std::size_t depth) {
    if (depth == order.size()) {
      visit(current);
      return;
    }
    const StudentId i = order[depth];
    for (const ProjectId p : d.choices[i]) {
      if (taken[p]) continue;
      bool fits = true;
      for (const auto& sv : d.supervision[p]) {
        if (load[sv.supervisor] + sv.fraction > 1.0 + kLoadTolerance) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;
      taken[p] = 1;
      for (const auto& sv : d.supervision[p]) load[sv.supervisor] += sv.fraction;
      current[i] = p;
      place(depth + 1);
      for (const auto& sv : d.supervision[p]) load[sv.supervisor] -= sv.fraction;
      taken[p] = 0;
    }
  };
  place(0);
}

inline std::vector<Allocation> enumerate_feasible(const Dataset& d, std::uint64_t cap = kDefaultOracleCap) {
  std::vector<Allocation> out;
  for_each_feasible(d, [&](const Allocation& a) { out.push_back(a); }, cap);
  return out;
}

struct OracleResult {
  double minimum_raw = 0.0;
  double minimum_normalized = 0.0;
  /// Every feasible allocation attaining the minimum, in lexicographic order.
  std::vector<Allocation> optima;
  std::uint64_t feasible_count = 0;

  std::size_t degeneracy() const { return optima.size(); }
};

/// Exhaustive minimum over all feasible allocations. Throws Infeasible when
/// the feasible set is empty.
inline OracleResult exact_minimum(const Dataset& d, const WeightScheme& w, std::uint64_t cap = kDefaultOracleCap) {
  OracleResult result;
  result.minimum_raw = std::numeric_limits<double>::infinity();
  for_each_feasible(
      d,
      [&](const Allocation& a) {
        ++result.feasible_count;
        double e = 0.0;
        for (StudentId i = 0; i < d.n_students; ++i) e -= w(d.rank_of(i, a[i]));
        if (e < result.minimum_raw - kEnergyTolerance) {
          result.minimum_raw = e;
          result.optima.clear();
          result.optima.push_back(a);
        } else if (std::abs(e - result.minimum_raw) <= kEnergyTolerance) {
          result.optima.push_back(a);
        }
      },
      cap);
  if (result.feasible_count == 0) throw Error(ErrorCode::Infeasible, "instance has no feasible allocation");
  std::sort(result.optima.begin(), result.optima.end());
  // Report the minimum through the histogram path so it compares bit-for-bit
  // with energies computed by the annealer.
  const auto h = histogram_of(d, result.optima.front());
  result.minimum_raw = energy_raw(h, w);
  result.minimum_normalized = energy_normalized(h, w, d.n_students);
  return result;
}

}  // namespace spa

#endif  // SPA_ORACLE_HPP
