#ifndef SPA_REPORT_HPP
#define SPA_REPORT_HPP

#include <string>

#include "spa/annealer.hpp"
#include "spa/csv.hpp"
#include "spa/io.hpp"
#include "spa/model.hpp"

namespace spa {

inline std::string weights_label(const WeightScheme& w) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) out += (k ? " " : "") + csv::format_number(w.values()[k]);
  return out;
}

/// Plain `key: value` summary of a single run. Contains no timing or host
/// information, so it is reproducible from (inputs, weights, schedule, seed).
inline std::string run_report(const Dataset& d, const WeightScheme& w, const Schedule& s, const RunResult& r) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + ": " + value + "\n"; };
  line("seed", std::to_string(r.seed));
  line("students", std::to_string(d.n_students));
  line("projects", std::to_string(d.n_projects));
  line("supervisors", std::to_string(d.n_supervisors));
  line("max_rank", std::to_string(d.max_rank));
  line("weights", weights_label(w));
  line("schedule", csv::format_number(s.t_start) + " -> " + csv::format_number(s.t_end) + " step " +
                       csv::format_number(s.t_step) + ", budgets " + std::to_string(s.attempted_budget_factor) + "N/" +
                       std::to_string(s.success_budget_factor) + "N, cap " + std::to_string(s.hard_cap_factor) + "N");
  std::string h;
  for (std::size_t k = 0; k < r.histogram.counts.size(); ++k) h += (k ? " " : "") + std::to_string(r.histogram.counts[k]);
  line("histogram", h);
  line("initial_energy_raw", csv::format_number(r.initial_energy.raw));
  line("initial_energy_normalized", csv::format_number(r.initial_energy.normalized));
  line("energy_raw", csv::format_number(r.energy.raw));
  line("energy_normalized", csv::format_number(r.energy.normalized));
  line("repair_iterations", std::to_string(r.repair_iterations));
  line("moves_attempted", std::to_string(r.counters.attempted));
  line("moves_accepted", std::to_string(r.counters.accepted));
  line("rejected_conflict", std::to_string(r.counters.rejected_conflict));
  line("rejected_overload", std::to_string(r.counters.rejected_overload));
  line("rejected_metropolis", std::to_string(r.counters.rejected_metropolis));
  line("no_alternative", std::to_string(r.counters.no_alternative));
  return out;
}

struct SolveOutputs {
  std::string allocation_csv;
  std::string time_series_csv;
  std::string report;
};

inline SolveOutputs solve_outputs(const Dataset& d, const WeightScheme& w, const Schedule& s, const RunResult& r) {
  return {write_allocation(d, r.allocation), write_time_series(r.series), run_report(d, w, s, r)};
}

}  // namespace spa

#endif  // SPA_REPORT_HPP
