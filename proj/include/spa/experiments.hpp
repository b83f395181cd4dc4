#ifndef SPA_EXPERIMENTS_HPP
#define SPA_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "spa/annealer.hpp"
#include "spa/csv.hpp"
#include "spa/model.hpp"
#include "spa/objective.hpp"
#include "spa/oracle.hpp"
#include "spa/rng.hpp"

namespace spa {

// ---------------------------------------------------------------------------
// Synthetic datasets

struct GeneratorConfig {
  std::size_t n_students = 19;
  std::size_t n_projects = 58;
  std::size_t n_supervisors = 27;
  int ranks = kDefaultMaxRank;
  /// Project j's selection weight is (popularity rank + 1)^-exponent; 0 is uniform.
  double popularity_exponent = 0.0;
  /// Each project's workload fraction is drawn uniformly from this list.
  std::vector<double> workload_fractions{0.5};
  std::uint64_t seed = 1;

  void validate() const {
    if (n_students < 1) throw Error(ErrorCode::InvalidArgument, "generator needs N >= 1");
    if (n_supervisors < 1) throw Error(ErrorCode::InvalidArgument, "generator needs S >= 1");
    if (ranks < 1 || n_projects < static_cast<std::size_t>(ranks))
      throw Error(ErrorCode::InvalidArgument, "generator needs M >= R >= 1");
    if (!(popularity_exponent >= 0.0)) throw Error(ErrorCode::InvalidArgument, "popularity exponent must be >= 0");
    if (workload_fractions.empty()) throw Error(ErrorCode::InvalidArgument, "no workload fractions given");
    for (double f : workload_fractions)
      if (!(f > 0.0 && f <= 1.0)) throw Error(ErrorCode::WorkloadOutOfRange, "generator fraction outside (0, 1]");
  }
};

namespace detail {

/// Draws `count` distinct indices with probability proportional to `weights`
/// (successive draws without replacement).
inline std::vector<ProjectId> weighted_sample(std::vector<double> weights, std::size_t count, Rng& rng) {
  std::vector<ProjectId> picked;
  picked.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = rng.uniform_open01() * total;
    std::size_t j = 0;
    for (; j + 1 < weights.size(); ++j) {
      if (weights[j] <= 0.0) continue;
      if (u < weights[j]) break;
      u -= weights[j];
    }
    // Rounding can leave u past the last positive weight; fall back to it.
    while (weights[j] <= 0.0) --j;
    picked.push_back(static_cast<ProjectId>(j));
    weights[j] = 0.0;
  }
  return picked;
}

inline void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.uniform_index(i)]);
}

}  // namespace detail

/// Students draw R distinct projects from a (shuffled) power-law popularity
/// profile; project j belongs to supervisor j mod S.
inline Dataset generate_dataset(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t m = cfg.n_projects;

  std::vector<std::size_t> popularity_rank(m);
  std::iota(popularity_rank.begin(), popularity_rank.end(), 0);
  detail::shuffle(popularity_rank, rng);
  std::vector<double> weights(m);
  for (std::size_t j = 0; j < m; ++j)
    weights[j] = std::pow(static_cast<double>(popularity_rank[j] + 1), -cfg.popularity_exponent);

  Dataset d;
  d.n_students = cfg.n_students;
  d.n_projects = m;
  d.n_supervisors = cfg.n_supervisors;
  d.max_rank = cfg.ranks;
  d.choices.reserve(cfg.n_students);
  for (std::size_t i = 0; i < cfg.n_students; ++i)
    d.choices.push_back(detail::weighted_sample(weights, static_cast<std::size_t>(cfg.ranks), rng));
  d.supervision.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double f = cfg.workload_fractions[rng.uniform_index(cfg.workload_fractions.size())];
    d.supervision[j].push_back({static_cast<SupervisorId>(j % cfg.n_supervisors), f});
  }
  return validate_dataset(std::move(d));
}

// ---------------------------------------------------------------------------
// Dataset transformations

/// Keeps only each student's first `keep` choices.
inline Dataset truncate_choices(const Dataset& d, int keep) {
  if (keep < 1 || keep >= d.max_rank)
    throw Error(ErrorCode::InvalidArgument, "truncate keep=" + std::to_string(keep) + " must lie in [1, " +
                                                std::to_string(d.max_rank - 1) + "]");
  Dataset out = d;
  out.max_rank = keep;
  for (auto& list : out.choices)
    if (list.size() > static_cast<std::size_t>(keep)) list.resize(static_cast<std::size_t>(keep));
  return out;
}

/// Student count closest (in M/N) to a requested project-to-student ratio.
inline std::size_t students_for_ratio(std::size_t n_projects, double target_ratio) {
  if (!(target_ratio > 0.0)) throw Error(ErrorCode::InvalidArgument, "target ratio must be positive");
  const double exact = static_cast<double>(n_projects) / target_ratio;
  const auto lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact)));
  const auto hi = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(exact)));
  auto miss = [&](std::size_t n) { return std::abs(static_cast<double>(n_projects) / static_cast<double>(n) - target_ratio); };
  return miss(lo) <= miss(hi) ? lo : hi;
}

/// Moves M/N towards `target_ratio` by deleting uniformly random students
/// (ratio up) or appending students with uniformly random distinct choices
/// (ratio down). Surviving students keep their relative order.
inline Dataset perturb_ratio(const Dataset& d, double target_ratio, Rng& rng) {
  const std::size_t target_n = students_for_ratio(d.n_projects, target_ratio);
  Dataset out = d;
  if (target_n < d.n_students) {
    std::vector<std::size_t> idx(d.n_students);
    std::iota(idx.begin(), idx.end(), 0);
    detail::shuffle(idx, rng);
    idx.resize(target_n);
    std::sort(idx.begin(), idx.end());
    out.choices.clear();
    out.labels.students.clear();
    for (auto i : idx) {
      out.choices.push_back(d.choices[i]);
      out.labels.students.push_back(d.labels.students[i]);
    }
  } else if (target_n > d.n_students) {
    std::unordered_set<std::string> used(d.labels.students.begin(), d.labels.students.end());
    const std::size_t r = std::min<std::size_t>(static_cast<std::size_t>(d.max_rank), d.n_projects);
    std::size_t next_label = 0;
    for (std::size_t i = d.n_students; i < target_n; ++i) {
      out.choices.push_back(detail::weighted_sample(std::vector<double>(d.n_projects, 1.0), r, rng));
      std::string label;
      do label = "X" + std::to_string(next_label++);
      while (used.count(label));
      used.insert(label);
      out.labels.students.push_back(label);
    }
  }
  out.n_students = target_n;
  return out;
}

// ---------------------------------------------------------------------------
// Batches

struct BatchStats {
  /// Normalised energies of the successful runs, in seed order.
  std::vector<double> energies;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> failed_seeds;
  double minimum = std::numeric_limits<double>::quiet_NaN();
  double mean = std::numeric_limits<double>::quiet_NaN();
  /// Sample standard deviation (n - 1); zero for a single run.
  double stddev = std::numeric_limits<double>::quiet_NaN();

  std::size_t runs() const { return energies.size(); }
  std::size_t failed() const { return failed_seeds.size(); }
  double feasibility_rate() const {
    const auto total = runs() + failed();
    return total == 0 ? 0.0 : static_cast<double>(runs()) / static_cast<double>(total);
  }
};

inline BatchStats summarize(std::vector<double> energies, std::vector<std::uint64_t> seeds,
                            std::vector<std::uint64_t> failed_seeds = {}) {
  BatchStats s;
  s.energies = std::move(energies);
  s.seeds = std::move(seeds);
  s.failed_seeds = std::move(failed_seeds);
  const std::size_t n = s.energies.size();
  if (n == 0) return s;
  s.minimum = *std::min_element(s.energies.begin(), s.energies.end());
  s.mean = std::accumulate(s.energies.begin(), s.energies.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double e : s.energies) ss += (e - s.mean) * (e - s.mean);
  s.stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  // Guard the min <= mean invariant against summation rounding on constant samples.
  if (s.mean < s.minimum) s.mean = s.minimum;
  return s;
}

struct RunRecord {
  std::uint64_t seed = 0;
  std::optional<RunResult> result;
  /// Failure message (RepairTimeout) when result is empty.
  std::string error;
};

struct BatchResult {
  BatchStats stats;
  std::vector<RunRecord> runs;

  std::vector<RunResult> successful() const {
    std::vector<RunResult> out;
    for (const auto& r : runs)
      if (r.result) out.push_back(*r.result);
    return out;
  }
};

/// `count` independent anneals with seeds base_seed .. base_seed + count - 1,
/// spread over `jobs` worker threads. Results are ordered by seed regardless
/// of scheduling, so a batch is reproducible for any job count.
inline BatchResult batch_run(const Dataset& d, const WeightScheme& w, const Schedule& s, std::size_t count,
                             std::uint64_t base_seed, std::size_t jobs = 1, bool record_series = true) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "batch needs at least one run");
  s.validate();
  BatchResult out;
  out.runs.resize(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    AnnealOptions options;
    options.record_series = record_series;
    for (std::size_t k = next++; k < count; k = next++) {
      RunRecord& rec = out.runs[k];
      rec.seed = base_seed + k;
      try {
        rec.result = anneal(d, w, s, rec.seed, options);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RepairTimeout) throw;
        rec.error = e.what();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, count);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&, j] {
        try {
          worker();
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<double> energies;
  std::vector<std::uint64_t> seeds, failed;
  for (const auto& r : out.runs) {
    if (r.result) {
      energies.push_back(r.result->energy.normalized);
      seeds.push_back(r.seed);
    } else {
      failed.push_back(r.seed);
    }
  }
  out.stats = summarize(std::move(energies), std::move(seeds), std::move(failed));
  return out;
}

// ---------------------------------------------------------------------------
// Allocation profiles

struct ProfileGroup {
  std::size_t energy_class = 0;
  Energy energy;
  AllocationHistogram histogram;
  /// Distinct allocations sharing this histogram, with how many runs found each.
  std::vector<std::pair<Allocation, std::size_t>> allocations;

  std::size_t runs() const {
    std::size_t n = 0;
    for (const auto& [a, k] : allocations) n += k;
    return n;
  }
};

struct ProfileReport {
  /// Ordered by energy (best first), then histogram (more high-ranked choices first).
  std::vector<ProfileGroup> groups;
  std::size_t energy_classes = 0;

  std::size_t distinct_allocations() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.allocations.size();
    return n;
  }
};

inline ProfileReport profile_report(const std::vector<RunResult>& results) {
  std::map<AllocationHistogram, ProfileGroup, std::greater<>> by_histogram;
  for (const auto& r : results) {
    auto [it, inserted] = by_histogram.try_emplace(r.histogram);
    ProfileGroup& g = it->second;
    if (inserted) {
      g.energy = r.energy;
      g.histogram = r.histogram;
    }
    auto a = std::find_if(g.allocations.begin(), g.allocations.end(),
                          [&](const auto& entry) { return entry.first == r.allocation; });
    if (a == g.allocations.end()) g.allocations.emplace_back(r.allocation, 1);
    else ++a->second;
  }

  ProfileReport report;
  for (auto& [h, g] : by_histogram) {
    std::sort(g.allocations.begin(), g.allocations.end());
    report.groups.push_back(std::move(g));
  }
  std::stable_sort(report.groups.begin(), report.groups.end(),
                   [](const ProfileGroup& a, const ProfileGroup& b) { return a.energy.raw < b.energy.raw - kEnergyTolerance; });
  for (std::size_t i = 0; i < report.groups.size(); ++i) {
    if (i > 0 && std::abs(report.groups[i].energy.raw - report.groups[i - 1].energy.raw) > kEnergyTolerance)
      ++report.energy_classes;
    report.groups[i].energy_class = report.energy_classes;
  }
  if (!report.groups.empty()) ++report.energy_classes;
  return report;
}

// ---------------------------------------------------------------------------
// Ratio sweep

struct SweepRow {
  double target_ratio = 0.0;
  double actual_ratio = 0.0;
  std::size_t n_students = 0;
  BatchStats stats;
  /// Mean number of students at each rank over successful runs.
  std::vector<double> mean_histogram;
  /// Students holding their last permitted choice, summed over successful runs.
  std::size_t last_choice_total = 0;
};

/// For each target ratio, perturbs `base` and runs a batch on the result.
/// Every ratio draws from the same stream, so the perturbed cohorts are
/// nested: removals keep a common prefix of one shuffle and additions extend
/// one common sequence of synthetic students.
inline std::vector<SweepRow> ratio_sweep(const Dataset& base, const std::vector<double>& ratios, const WeightScheme& w,
                                         const Schedule& s, std::size_t runs, std::uint64_t seed, std::size_t jobs = 1) {
  std::vector<SweepRow> rows;
  const Rng root(seed);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    Rng rng = root;
    const Dataset d = perturb_ratio(base, ratios[i], rng);
    const BatchResult batch = batch_run(d, w, s, runs, seed + 1000 * (i + 1), jobs, false);
    SweepRow row;
    row.target_ratio = ratios[i];
    row.n_students = d.n_students;
    row.actual_ratio = static_cast<double>(d.n_projects) / static_cast<double>(d.n_students);
    row.stats = batch.stats;
    row.mean_histogram.assign(static_cast<std::size_t>(d.max_rank), 0.0);
    for (const auto& rec : batch.runs) {
      if (!rec.result) continue;
      for (std::size_t k = 0; k < rec.result->histogram.counts.size(); ++k)
        row.mean_histogram[k] += static_cast<double>(rec.result->histogram.counts[k]);
      row.last_choice_total += rec.result->histogram.counts.back();
    }
    if (row.stats.runs() > 0)
      for (auto& x : row.mean_histogram) x /= static_cast<double>(row.stats.runs());
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV reports

inline std::string stats_csv(const BatchStats& s) {
  std::string out = "runs,failed,feasibility_rate,min,mean,std\n";
  out += std::to_string(s.runs()) + "," + std::to_string(s.failed()) + "," + csv::format_number(s.feasibility_rate()) +
         "," + csv::format_number(s.minimum) + "," + csv::format_number(s.mean) + "," + csv::format_number(s.stddev) + "\n";
  return out;
}

inline std::string runs_csv(const BatchResult& b) {
  std::string out = "seed,status,energy_raw,energy_normalized,histogram\n";
  for (const auto& r : b.runs) {
    out += std::to_string(r.seed) + ",";
    if (!r.result) {
      out += "infeasible,,,\n";
      continue;
    }
    std::string h;
    for (std::size_t k = 0; k < r.result->histogram.counts.size(); ++k)
      h += (k ? " " : "") + std::to_string(r.result->histogram.counts[k]);
    out += "ok," + csv::format_number(r.result->energy.raw) + "," + csv::format_number(r.result->energy.normalized) +
           "," + h + "\n";
  }
  return out;
}

inline std::string profile_csv(const ProfileReport& report) {
  std::size_t ranks = 0;
  for (const auto& g : report.groups) ranks = std::max(ranks, g.histogram.counts.size());
  std::string out = "energy_class,profile,energy_raw,energy_normalized";
  for (std::size_t k = 0; k < ranks; ++k) out += ",n" + std::to_string(k + 1);
  out += ",distinct_allocations,runs\n";
  for (std::size_t i = 0; i < report.groups.size(); ++i) {
    const auto& g = report.groups[i];
    out += std::to_string(g.energy_class) + "," + std::to_string(i) + "," + csv::format_number(g.energy.raw) + "," +
           csv::format_number(g.energy.normalized);
    for (std::size_t k = 0; k < ranks; ++k)
      out += "," + std::to_string(k < g.histogram.counts.size() ? g.histogram.counts[k] : 0);
    out += "," + std::to_string(g.allocations.size()) + "," + std::to_string(g.runs()) + "\n";
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::size_t ranks = 0;
  for (const auto& r : rows) ranks = std::max(ranks, r.mean_histogram.size());
  std::string out = "target_ratio,actual_ratio,n_students,runs,failed,min,mean,std";
  for (std::size_t k = 0; k < ranks; ++k) out += ",mean_n" + std::to_string(k + 1);
  out += ",last_choice_total\n";
  for (const auto& r : rows) {
    out += csv::format_number(r.target_ratio) + "," + csv::format_number(r.actual_ratio) + "," +
           std::to_string(r.n_students) + "," + std::to_string(r.stats.runs()) + "," + std::to_string(r.stats.failed()) +
           "," + csv::format_number(r.stats.minimum) + "," + csv::format_number(r.stats.mean) + "," +
           csv::format_number(r.stats.stddev);
    for (std::size_t k = 0; k < ranks; ++k)
      out += "," + csv::format_number(k < r.mean_histogram.size() ? r.mean_histogram[k] : 0.0);
    out += "," + std::to_string(r.last_choice_total) + "\n";
  }
  return out;
}

}  // namespace spa

#endif  // SPA_EXPERIMENTS_HPP
