#ifndef SPA_CSV_HPP
#define SPA_CSV_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spa/error.hpp"

namespace spa::csv {

using Row = std::vector<std::string>;
using Table = std::vector<Row>;

/// Parses comma-separated text: LF or CRLF line endings, double-quoted fields
/// with "" as the escaped quote, optional UTF-8 byte-order mark. Short rows
/// are padded with empty cells so the result is rectangular. Empty lines at
/// the end of the document are dropped.
inline Table parse(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  Table table;
  Row row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    table.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw Error(ErrorCode::MalformedCell, "line " + std::to_string(line) + ": stray quote inside unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',': end_field(); break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        ++line;
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedCell, "line " + std::to_string(line) + ": unterminated quoted field");
  if (field_started || !row.empty()) end_row();

  // Only lines with no characters at all are dropped; a line of bare commas
  // is a row of blank cells (e.g. a project nobody chose).
  while (!table.empty() && table.back().size() == 1 && table.back()[0].empty()) table.pop_back();

  std::size_t width = 0;
  for (const auto& r : table) width = std::max(width, r.size());
  for (auto& r : table) r.resize(width);
  return table;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(row[i]);
  }
  out.push_back('\n');
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

/// Locale-independent decimal parse of the whole (trimmed) cell.
inline std::optional<double> to_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

inline bool is_numeric_or_blank(std::string_view cell) {
  return trim(cell).empty() || to_number(cell).has_value();
}

/// Shortest decimal representation that round-trips.
inline std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace spa::csv

#endif  // SPA_CSV_HPP
