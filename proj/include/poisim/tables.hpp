#pragma once

#include <algorithm>
#include <string>
#include <vector>

// Uniform tabular output: every report in the toolkit is emitted both as CSV
// (machine-readable) and as column-aligned Markdown (human-readable). "--"
// marks values that are undefined for the row (e.g. conditionals over an
// empty denominator).

namespace poisim {

inline constexpr const char* kAbsentCell = "--";

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out.push_back(',');
    out += detail::csv_escape(t.header[i]);
  }
  out.push_back('\n');
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += detail::csv_escape(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string to_markdown(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  auto emit_row = [&](const std::vector<std::string>& row) {
    std::string line = "|";
    for (std::size_t i = 0; i < width.size(); ++i) {
      const std::string& cell = i < row.size() ? row[i] : std::string{};
      line += " " + cell + std::string(width[i] - cell.size(), ' ') + " |";
    }
    return line + "\n";
  };
  std::string out;
  if (!t.title.empty()) out += "### " + t.title + "\n\n";
  out += emit_row(t.header);
  std::string sep = "|";
  for (std::size_t w : width) sep += " " + std::string(w, '-') + " |";
  out += sep + "\n";
  for (const auto& row : t.rows) out += emit_row(row);
  return out;
}

}  // namespace poisim
