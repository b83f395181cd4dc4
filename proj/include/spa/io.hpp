#ifndef SPA_IO_HPP
#define SPA_IO_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spa/annealer.hpp"
#include "spa/csv.hpp"
#include "spa/model.hpp"

namespace spa {

// Both input files are project-by-column grids: rows are projects, columns
// are students (preferences) or supervisors (workloads). A first row or first
// column holding any non-numeric text is read as labels.

struct HeaderLayout {
  bool header_row = false;
  bool header_col = false;
};

inline HeaderLayout detect_headers(const csv::Table& t) {
  HeaderLayout h;
  if (t.empty()) return h;
  for (std::size_t c = 1; c < t[0].size(); ++c)
    if (!csv::is_numeric_or_blank(t[0][c])) h.header_row = true;
  for (std::size_t r = 1; r < t.size(); ++r)
    if (!t[r].empty() && !csv::is_numeric_or_blank(t[r][0])) h.header_col = true;
  if (!h.header_row && !h.header_col && !t[0].empty() && !csv::is_numeric_or_blank(t[0][0])) {
    // Only the corner is textual: a single column of labels, or a single row.
    if (t[0].size() == 1) h.header_row = true;
    else if (t.size() == 1) h.header_col = true;
    else throw Error(ErrorCode::MalformedCell, "row 1, column 1: non-numeric cell outside any label row or column");
  }
  return h;
}

namespace detail {

inline std::string cell_ref(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1);
}

inline std::vector<std::string> row_labels(const csv::Table& t, HeaderLayout h, const std::string& prefix) {
  const std::size_t first = h.header_row ? 1 : 0;
  std::vector<std::string> out;
  for (std::size_t r = first; r < t.size(); ++r)
    out.push_back(h.header_col ? std::string(csv::trim(t[r][0])) : prefix + std::to_string(r - first));
  return out;
}

inline std::vector<std::string> column_labels(const csv::Table& t, HeaderLayout h, const std::string& prefix) {
  const std::size_t first = h.header_col ? 1 : 0;
  const std::size_t width = t.empty() ? 0 : t[0].size();
  std::vector<std::string> out;
  for (std::size_t c = first; c < width; ++c)
    out.push_back(h.header_row ? std::string(csv::trim(t[0][c])) : prefix + std::to_string(c - first));
  return out;
}

}  // namespace detail

struct PreferencesTable {
  std::vector<std::vector<ProjectId>> choices;
  std::size_t n_projects = 0;
  std::vector<std::string> student_labels;
  std::vector<std::string> project_labels;
};

/// Reads the preferences grid. Each student column must hold ranks forming a
/// contiguous prefix 1..r with r <= max_rank.
inline PreferencesTable parse_preferences(std::string_view text, int max_rank = kDefaultMaxRank) {
  const csv::Table t = csv::parse(text);
  const HeaderLayout h = detect_headers(t);
  const std::size_t r0 = h.header_row ? 1 : 0;
  const std::size_t c0 = h.header_col ? 1 : 0;

  PreferencesTable out;
  out.project_labels = detail::row_labels(t, h, "P");
  out.student_labels = detail::column_labels(t, h, "S");
  out.n_projects = out.project_labels.size();
  const std::size_t n_students = out.student_labels.size();
  if (out.n_projects == 0) throw Error(ErrorCode::MalformedCell, "preferences file has no project rows");
  if (n_students == 0) throw Error(ErrorCode::MalformedCell, "preferences file has no student columns");

  out.choices.resize(n_students);
  for (std::size_t s = 0; s < n_students; ++s) {
    const std::size_t col = c0 + s;
    // by_rank[k] = row holding rank k+1
    std::vector<std::ptrdiff_t> by_rank(static_cast<std::size_t>(max_rank), -1);
    int highest = 0;
    for (std::size_t r = r0; r < t.size(); ++r) {
      const std::string_view cell = csv::trim(t[r][col]);
      if (cell.empty()) continue;
      const auto value = csv::to_number(cell);
      if (!value || *value != std::floor(*value) || *value < 1 || *value > max_rank)
        throw Error(ErrorCode::MalformedCell, detail::cell_ref(r, col) + ": expected a rank 1.." +
                                                  std::to_string(max_rank) + ", got '" + std::string(cell) + "'");
      const int rank = static_cast<int>(*value);
      auto& slot = by_rank[static_cast<std::size_t>(rank - 1)];
      if (slot >= 0)
        throw Error(ErrorCode::DuplicateRank, "column " + std::to_string(col + 1) + " (" + out.student_labels[s] +
                                                  "): rank " + std::to_string(rank) + " appears on rows " +
                                                  std::to_string(slot + 1) + " and " + std::to_string(r + 1));
      slot = static_cast<std::ptrdiff_t>(r);
      highest = std::max(highest, rank);
    }
    if (highest == 0)
      throw Error(ErrorCode::EmptyChoiceList, "column " + std::to_string(col + 1) + " (" + out.student_labels[s] +
                                                  ") has no choices");
    for (int k = 0; k < highest; ++k) {
      const auto row = by_rank[static_cast<std::size_t>(k)];
      if (row < 0)
        throw Error(ErrorCode::NonContiguousRanks, "column " + std::to_string(col + 1) + " (" + out.student_labels[s] +
                                                       "): rank " + std::to_string(k + 1) + " missing below rank " +
                                                       std::to_string(highest));
      out.choices[s].push_back(static_cast<ProjectId>(static_cast<std::size_t>(row) - r0));
    }
  }
  return out;
}

struct SupervisorTable {
  std::vector<std::vector<Supervision>> supervision;
  std::size_t n_supervisors = 0;
  std::vector<std::string> supervisor_labels;
  std::vector<std::string> project_labels;
};

/// Reads the workload grid. Blank and zero cells both mean "does not
/// supervise this project".
inline SupervisorTable parse_supervisors(std::string_view text) {
  const csv::Table t = csv::parse(text);
  const HeaderLayout h = detect_headers(t);
  const std::size_t r0 = h.header_row ? 1 : 0;
  const std::size_t c0 = h.header_col ? 1 : 0;

  SupervisorTable out;
  out.project_labels = detail::row_labels(t, h, "P");
  out.supervisor_labels = detail::column_labels(t, h, "Sup");
  out.n_supervisors = out.supervisor_labels.size();
  out.supervision.resize(out.project_labels.size());
  for (std::size_t r = r0; r < t.size(); ++r) {
    for (std::size_t s = 0; s < out.n_supervisors; ++s) {
      const std::size_t col = c0 + s;
      const std::string_view cell = csv::trim(t[r][col]);
      if (cell.empty()) continue;
      const auto value = csv::to_number(cell);
      if (!value)
        throw Error(ErrorCode::MalformedCell, detail::cell_ref(r, col) + ": expected a workload fraction, got '" +
                                                  std::string(cell) + "'");
      if (!(*value >= 0.0 && *value <= 1.0))
        throw Error(ErrorCode::WorkloadOutOfRange, detail::cell_ref(r, col) + ": workload " + std::string(cell) +
                                                       " outside [0, 1]");
      if (*value > 0.0) out.supervision[r - r0].push_back({static_cast<SupervisorId>(s), *value});
    }
  }
  return out;
}

/// Combines both files into a validated dataset. Project labels come from the
/// preferences file.
inline Dataset load_dataset(std::string_view preferences_csv, std::string_view supervisors_csv,
                            int max_rank = kDefaultMaxRank) {
  PreferencesTable prefs = parse_preferences(preferences_csv, max_rank);
  SupervisorTable sup = parse_supervisors(supervisors_csv);
  if (sup.supervision.size() != prefs.n_projects)
    throw Error(ErrorCode::RowCountMismatch, "preferences file has " + std::to_string(prefs.n_projects) +
                                                 " project rows, supervisor file has " +
                                                 std::to_string(sup.supervision.size()));
  Dataset d;
  d.n_students = prefs.choices.size();
  d.n_projects = prefs.n_projects;
  d.n_supervisors = sup.n_supervisors;
  d.max_rank = max_rank;
  d.choices = std::move(prefs.choices);
  d.supervision = std::move(sup.supervision);
  d.labels = {std::move(prefs.student_labels), std::move(prefs.project_labels), std::move(sup.supervisor_labels)};
  return validate_dataset(std::move(d));
}

/// Preferences grid with a label row and label column.
inline std::string serialize_preferences(const Dataset& d) {
  std::string out;
  csv::Row header{""};
  header.insert(header.end(), d.labels.students.begin(), d.labels.students.end());
  out += csv::join(header);
  std::vector<csv::Row> rows(d.n_projects, csv::Row(d.n_students + 1));
  for (ProjectId p = 0; p < d.n_projects; ++p) rows[p][0] = d.project_label(p);
  for (StudentId i = 0; i < d.n_students; ++i)
    for (std::size_t k = 0; k < d.choices[i].size(); ++k) rows[d.choices[i][k]][i + 1] = std::to_string(k + 1);
  for (const auto& r : rows) out += csv::join(r);
  return out;
}

inline std::string serialize_supervisors(const Dataset& d) {
  std::string out;
  csv::Row header{""};
  header.insert(header.end(), d.labels.supervisors.begin(), d.labels.supervisors.end());
  out += csv::join(header);
  for (ProjectId p = 0; p < d.n_projects; ++p) {
    csv::Row row(d.n_supervisors + 1);
    row[0] = d.project_label(p);
    for (const auto& sv : d.supervision[p]) row[sv.supervisor + 1] = csv::format_number(sv.fraction);
    out += csv::join(row);
  }
  return out;
}

/// One `student,project,rank` line per student in student order, no header.
inline std::string write_allocation(const Dataset& d, const Allocation& a) {
  const auto report = is_feasible(d, a);
  if (!report) throw Error(ErrorCode::InfeasibleAllocation, "refusing to write an infeasible allocation");
  std::string out;
  for (StudentId i = 0; i < d.n_students; ++i)
    out += csv::join({d.student_label(i), d.project_label(a[i]), std::to_string(d.rank_of(i, a[i]))});
  return out;
}

struct AllocationRow {
  StudentId student;
  ProjectId project;
  Rank rank;

  friend bool operator==(const AllocationRow&, const AllocationRow&) = default;
};

/// Reads an allocation file back against its dataset, checking that each
/// rank column agrees with the student's preference list.
inline std::vector<AllocationRow> read_allocation_rows(std::string_view text, const Dataset& d) {
  std::unordered_map<std::string, StudentId> students;
  std::unordered_map<std::string, ProjectId> projects;
  for (StudentId i = 0; i < d.n_students; ++i) students.emplace(d.student_label(i), i);
  for (ProjectId p = 0; p < d.n_projects; ++p) projects.emplace(d.project_label(p), p);

  std::vector<AllocationRow> rows;
  const csv::Table t = csv::parse(text);
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t[r].size() != 3) throw Error(ErrorCode::MalformedCell, "row " + std::to_string(r + 1) + ": expected 3 fields");
    const auto s = students.find(std::string(csv::trim(t[r][0])));
    if (s == students.end()) throw Error(ErrorCode::MalformedCell, detail::cell_ref(r, 0) + ": unknown student");
    const auto p = projects.find(std::string(csv::trim(t[r][1])));
    if (p == projects.end()) throw Error(ErrorCode::UnknownProject, detail::cell_ref(r, 1) + ": unknown project");
    const auto rank = csv::to_number(t[r][2]);
    if (!rank || *rank != std::floor(*rank))
      throw Error(ErrorCode::MalformedCell, detail::cell_ref(r, 2) + ": expected an integer rank");
    if (static_cast<Rank>(*rank) != d.rank_of(s->second, p->second))
      throw Error(ErrorCode::RankOutOfRange, "row " + std::to_string(r + 1) + ": rank does not match preferences");
    rows.push_back({s->second, p->second, static_cast<Rank>(*rank)});
  }
  return rows;
}

inline Allocation read_allocation(std::string_view text, const Dataset& d) {
  const auto rows = read_allocation_rows(text, d);
  if (rows.size() != d.n_students)
    throw Error(ErrorCode::RowCountMismatch, "allocation has " + std::to_string(rows.size()) + " rows for " +
                                                 std::to_string(d.n_students) + " students");
  Allocation a{std::vector<ProjectId>(d.n_students, 0)};
  std::vector<char> seen(d.n_students, 0);
  for (const auto& row : rows) {
    if (seen[row.student]) throw Error(ErrorCode::MalformedCell, "student " + d.student_label(row.student) + " listed twice");
    seen[row.student] = 1;
    a[row.student] = row.project;
  }
  return a;
}

/// `temperature,energy` header followed by one row per sample.
inline std::string write_time_series(const std::vector<TimeSample>& samples) {
  std::string out = "temperature,energy\n";
  for (const auto& s : samples) out += csv::format_number(s.temperature) + "," + csv::format_number(s.energy) + "\n";
  return out;
}

}  // namespace spa

#endif  // SPA_IO_HPP
