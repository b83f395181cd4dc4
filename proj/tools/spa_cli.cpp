// Command-line front end for the student-project allocation solver.
//
// Exit codes: 0 success, 2 unreadable/malformed input, 3 infeasible
// instance, 4 internal error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spa/spa.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

int exit_code_for(spa::ErrorCode code) {
  using spa::ErrorCode;
  switch (code) {
    case ErrorCode::RepairTimeout:
    case ErrorCode::Infeasible: return kExitInfeasible;
    case ErrorCode::InfeasibleAllocation: return kExitInternal;
    default: return kExitParse;
  }
}

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct CommonOptions {
  std::string prefs;
  std::string supervisors;
  std::string weights = "linear";
  int max_rank = spa::kDefaultMaxRank;
  spa::Schedule schedule;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t runs = 20;
  std::size_t jobs = 1;
  std::string out_dir = ".";
};

spa::WeightScheme parse_weights(const std::string& spec, int max_rank) {
  if (spec == "linear") return max_rank <= 4 ? spa::WeightScheme::linear() : spa::WeightScheme::linear(max_rank);
  if (spec == "opinion") return spa::WeightScheme::opinion();
  std::vector<double> w;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = spa::csv::to_number(item);
    if (!v) throw spa::Error(spa::ErrorCode::InvalidArgument, "bad weight '" + item + "'");
    w.push_back(*v);
  }
  return spa::WeightScheme(std::move(w));
}

std::uint64_t resolve_seed(CommonOptions& o) {
  if (!o.seed_given) {
    o.seed = static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
    o.seed_given = true;
  }
  return o.seed;
}

spa::Dataset load(const CommonOptions& o) {
  if (o.prefs.empty() || o.supervisors.empty()) throw InputError("--prefs and --supervisors are required");
  return spa::load_dataset(read_file(o.prefs), read_file(o.supervisors), o.max_rank);
}

void add_input_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--prefs", o.prefs, "Preferences CSV (projects x students)");
  cmd->add_option("--supervisors", o.supervisors, "Supervisor workload CSV (projects x supervisors)");
  cmd->add_option("--max-rank", o.max_rank, "Largest rank a student may list")->check(CLI::PositiveNumber);
}

void add_solver_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--weights", o.weights, "linear | opinion | comma-separated list");
  cmd->add_option("--t-start", o.schedule.t_start, "Initial temperature");
  cmd->add_option("--t-end", o.schedule.t_end, "Final temperature");
  cmd->add_option("--t-step", o.schedule.t_step, "Temperature step");
  cmd->add_option("--attempted-factor", o.schedule.attempted_budget_factor, "Attempted moves per level, times N");
  cmd->add_option("--success-factor", o.schedule.success_budget_factor, "Successful moves per level, times N");
  cmd->add_option("--cap-factor", o.schedule.hard_cap_factor, "Hard cap on attempted moves per level, times N");
  cmd->add_option("--seed", o.seed, "Random seed (default: system time)")->each([&o](const std::string&) {
    o.seed_given = true;
  });
  cmd->add_option("--jobs", o.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
}

int run_solve(CommonOptions& o) {
  const spa::Dataset d = load(o);
  const auto w = parse_weights(o.weights, d.max_rank);
  const auto seed = resolve_seed(o);
  std::fprintf(stderr, "seed %llu, %zu students, %zu projects, %zu supervisors\n",
               static_cast<unsigned long long>(seed), d.n_students, d.n_projects, d.n_supervisors);

  spa::AnnealOptions options;
  const std::size_t levels = o.schedule.levels();
  const std::size_t stride = std::max<std::size_t>(1, levels / 10);
  options.on_level = [&](std::size_t level, double t, const spa::AnnealState& s) {
    if (level % stride == 0 || level + 1 == levels) {
      const auto e = s.energy();
      std::fprintf(stderr, "T = %8.4f  E = %10.4f  E* = %9.4f\n", t, e.raw, e.normalized);
    }
  };
  const auto result = spa::anneal(d, w, o.schedule, seed, options);
  const auto out = spa::solve_outputs(d, w, o.schedule, result);
  const fs::path dir(o.out_dir);
  write_file(dir / "allocation.csv", out.allocation_csv);
  write_file(dir / "timeseries.csv", out.time_series_csv);
  write_file(dir / "report.txt", out.report);
  std::cout << out.report;
  return kExitOk;
}

int run_batch(CommonOptions& o) {
  const spa::Dataset d = load(o);
  const auto w = parse_weights(o.weights, d.max_rank);
  const auto seed = resolve_seed(o);
  const auto batch = spa::batch_run(d, w, o.schedule, o.runs, seed, o.jobs, false);
  const fs::path dir(o.out_dir);
  const auto stats = spa::stats_csv(batch.stats);
  write_file(dir / "stats.csv", stats);
  write_file(dir / "runs.csv", spa::runs_csv(batch));
  write_file(dir / "profiles.csv", spa::profile_csv(spa::profile_report(batch.successful())));
  std::cout << "base_seed: " << seed << "\n" << stats;
  return batch.stats.runs() == 0 ? kExitInfeasible : kExitOk;
}

int run_oracle(CommonOptions& o, std::uint64_t cap) {
  const spa::Dataset d = load(o);
  const auto w = parse_weights(o.weights, d.max_rank);
  const auto r = spa::exact_minimum(d, w, cap);
  std::ostringstream ss;
  ss << "minimum_raw: " << spa::csv::format_number(r.minimum_raw) << "\n"
     << "minimum_normalized: " << spa::csv::format_number(r.minimum_normalized) << "\n"
     << "degenerate: " << r.degeneracy() << "\n"
     << "feasible: " << r.feasible_count << "\n";
  std::cout << ss.str();
  std::string optima = "optimum,student,project,rank\n";
  for (std::size_t k = 0; k < r.optima.size(); ++k) {
    const auto& a = r.optima[k];
    for (spa::StudentId i = 0; i < d.n_students; ++i)
      optima += std::to_string(k) + "," + spa::csv::join({d.student_label(i), d.project_label(a[i]),
                                                          std::to_string(d.rank_of(i, a[i]))});
  }
  write_file(fs::path(o.out_dir) / "optima.csv", optima);
  return kExitOk;
}

int run_truncate(CommonOptions& o, int keep) {
  const spa::Dataset t = spa::truncate_choices(load(o), keep);
  const fs::path dir(o.out_dir);
  write_file(dir / "preferences.csv", spa::serialize_preferences(t));
  write_file(dir / "supervisors.csv", spa::serialize_supervisors(t));
  std::cout << "kept " << keep << " choices for " << t.n_students << " students\n";
  return kExitOk;
}

int run_sweep(CommonOptions& o, const std::vector<double>& ratios) {
  const spa::Dataset d = load(o);
  const auto w = parse_weights(o.weights, d.max_rank);
  const auto seed = resolve_seed(o);
  const auto rows = spa::ratio_sweep(d, ratios, w, o.schedule, o.runs, seed, o.jobs);
  const auto text = spa::sweep_csv(rows);
  write_file(fs::path(o.out_dir) / "sweep.csv", text);
  std::cout << "seed: " << seed << "\n" << text;
  return kExitOk;
}

int run_generate(CommonOptions& o, spa::GeneratorConfig cfg) {
  cfg.seed = resolve_seed(o);
  const spa::Dataset d = spa::generate_dataset(cfg);
  const fs::path dir(o.out_dir);
  write_file(dir / "preferences.csv", spa::serialize_preferences(d));
  write_file(dir / "supervisors.csv", spa::serialize_supervisors(d));
  std::cout << "seed: " << cfg.seed << "\ngenerated " << d.n_students << " students, " << d.n_projects
            << " projects, " << d.n_supervisors << " supervisors\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated-annealing student-project allocation"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* solve = app.add_subcommand("solve", "Anneal one allocation and write allocation/time-series/report files");
  add_input_flags(solve, o);
  add_solver_flags(solve, o);
  solve->add_option("--out-dir", o.out_dir, "Output directory");

  auto* batch = app.add_subcommand("batch", "Independent runs with min/mean/std statistics");
  add_input_flags(batch, o);
  add_solver_flags(batch, o);
  batch->add_option("--runs", o.runs, "Number of runs")->check(CLI::PositiveNumber);
  batch->add_option("--out-dir", o.out_dir, "Output directory");

  std::uint64_t oracle_cap = spa::kDefaultOracleCap;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive minimum and degenerate optima of a small instance");
  add_input_flags(oracle, o);
  oracle->add_option("--weights", o.weights, "linear | opinion | comma-separated list");
  oracle->add_option("--cap", oracle_cap, "Maximum candidate assignments");
  oracle->add_option("--out-dir", o.out_dir, "Output directory");

  int keep = 3;
  auto* truncate = app.add_subcommand("truncate", "Drop choices beyond --keep and write the new input files");
  add_input_flags(truncate, o);
  truncate->add_option("--keep", keep, "Choices to keep")->check(CLI::PositiveNumber);
  truncate->add_option("--out-dir", o.out_dir, "Output directory");

  std::vector<double> ratios{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  auto* sweep = app.add_subcommand("ratio-sweep", "Batch runs across project-to-student ratios");
  add_input_flags(sweep, o);
  add_solver_flags(sweep, o);
  sweep->add_option("--ratios", ratios, "Target M/N ratios")->delimiter(',');
  sweep->add_option("--runs", o.runs, "Runs per ratio")->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", o.out_dir, "Output directory");

  spa::GeneratorConfig gen;
  double skew = 0.0;
  std::vector<double> fractions{0.5};
  auto* generate = app.add_subcommand("generate", "Write a synthetic preferences/supervisors pair");
  generate->add_option("--n", gen.n_students, "Students")->required();
  generate->add_option("--m", gen.n_projects, "Projects")->required();
  generate->add_option("--s", gen.n_supervisors, "Supervisors")->required();
  generate->add_option("--r", gen.ranks, "Choices per student");
  generate->add_option("--skew", skew, "Popularity power-law exponent (0 = uniform)");
  generate->add_option("--fractions", fractions, "Workload fractions to draw from")->delimiter(',');
  generate->add_option("--seed", o.seed, "Random seed (default: system time)")->each([&o](const std::string&) {
    o.seed_given = true;
  });
  generate->add_option("--out-dir", o.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }
  if (o.runs == 0 && batch->parsed()) o.runs = 20;
  if (sweep->parsed() && sweep->count("--runs") == 0) o.runs = 10;

  try {
    if (solve->parsed()) return run_solve(o);
    if (batch->parsed()) return run_batch(o);
    if (oracle->parsed()) return run_oracle(o, oracle_cap);
    if (truncate->parsed()) return run_truncate(o, keep);
    if (sweep->parsed()) return run_sweep(o, ratios);
    if (generate->parsed()) {
      gen.popularity_exponent = skew;
      gen.workload_fractions = fractions;
      return run_generate(o, gen);
    }
  } catch (const spa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
