#ifndef SPA_OBJECTIVE_HPP
#define SPA_OBJECTIVE_HPP

#include <cstddef>
#include <string>

#include "spa/model.hpp"

namespace spa {

struct Energy {
  double raw = 0.0;
  /// Rescaled so that an all-first-choices allocation scores exactly -100.
  double normalized = 0.0;
};

/// E = -sum_k w_k n_k.
inline double energy_raw(const AllocationHistogram& h, const WeightScheme& w) {
  double e = 0.0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    if (k >= w.size())
      throw Error(ErrorCode::RankOutOfRange, "histogram has students at rank " + std::to_string(k + 1) +
                                                 " but only " + std::to_string(w.size()) + " weights");
    e -= w.values()[k] * static_cast<double>(h.counts[k]);
  }
  return e;
}

/// -(100/n) sum_k (w_k / w_1) n_k.
inline double energy_normalized(const AllocationHistogram& h, const WeightScheme& w, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyCohort, "cannot normalise over zero students");
  if (h.total() != n)
    throw Error(ErrorCode::InvalidArgument, "histogram total " + std::to_string(h.total()) + " != " + std::to_string(n));
  double sum = 0.0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    if (k >= w.size()) throw Error(ErrorCode::RankOutOfRange, "rank " + std::to_string(k + 1) + " has no weight");
    sum += (w.values()[k] / w.first()) * static_cast<double>(h.counts[k]);
  }
  return -(100.0 / static_cast<double>(n)) * sum;
}

inline double normalize_energy(double raw, const WeightScheme& w, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::EmptyCohort, "cannot normalise over zero students");
  return (100.0 / (static_cast<double>(n) * w.first())) * raw;
}

inline Energy energy_of(const Dataset& d, const Allocation& a, const WeightScheme& w) {
  const auto h = histogram_of(d, a);
  return {energy_raw(h, w), energy_normalized(h, w, d.n_students)};
}

/// Change in raw energy when `student` moves from their current rank to
/// `new_rank`: w_old - w_new.
inline double delta_energy(const Dataset& d, const Allocation& a, StudentId student, Rank new_rank,
                           const WeightScheme& w) {
  const Rank old_rank = d.rank_of(student, a.assignment.at(student));
  if (old_rank == 0) throw Error(ErrorCode::InfeasibleAllocation, "student " + std::to_string(student) + " holds an unlisted project");
  if (new_rank < 1 || static_cast<std::size_t>(new_rank) > d.choices[student].size())
    throw Error(ErrorCode::RankOutOfRange, "student " + std::to_string(student) + " has no rank " + std::to_string(new_rank));
  if (new_rank == old_rank) throw Error(ErrorCode::SameRank, "student " + std::to_string(student) + " already holds rank " + std::to_string(new_rank));
  return w(old_rank) - w(new_rank);
}

}  // namespace spa

#endif  // SPA_OBJECTIVE_HPP
