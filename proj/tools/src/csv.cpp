#include "qwh_cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qwh::cli {
namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s == "nan") {
    out = std::nan("");
    return true;
  }
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && end == s.data() + s.size();
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::logic_error("row has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  rows.push_back(std::move(cells));
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  return std::size_t(it - columns.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  double v = 0.0;
  if (!parse_double(rows.at(row).at(column(name)), v)) throw std::runtime_error("non-numeric cell in " + name);
  return v;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_count(std::size_t value) { return std::to_string(value); }

void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& [key, value] : table.metadata) os << "# " << key << '=' << value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') throw std::runtime_error("CRLF line ending");
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header) throw std::runtime_error("metadata after header");
      auto body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) table.metadata.emplace_back(body, "");
      else table.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    auto cells = split_cells(line);
    if (!header) {
      table.columns = std::move(cells);
      header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (!header) throw std::runtime_error("missing header line");
  return table;
}

std::vector<std::string> schema_problems(const CsvTable& table, const std::vector<std::string>& expected_columns,
                                         const std::vector<std::string>& grid_columns,
                                         const std::vector<std::string>& text_columns) {
  std::vector<std::string> problems;
  if (table.columns != expected_columns) problems.push_back("header does not match expected columns");
  std::vector<std::size_t> grid;
  for (const auto& g : grid_columns) {
    const auto it = std::find(table.columns.begin(), table.columns.end(), g);
    if (it == table.columns.end()) problems.push_back("missing grid column " + g);
    else grid.push_back(std::size_t(it - table.columns.begin()));
  }
  std::vector<double> previous;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = "row " + std::to_string(r + 1);
    if (row.size() != table.columns.size()) {
      problems.push_back(where + ": " + std::to_string(row.size()) + " cells");
      continue;
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::find(text_columns.begin(), text_columns.end(), table.columns[c]) != text_columns.end()) continue;
      double v = 0.0;
      if (!parse_double(row[c], v)) problems.push_back(where + ": non-numeric " + table.columns[c]);
    }
    std::vector<double> key;
    for (const auto c : grid) {
      double v = 0.0;
      parse_double(row[c], v);
      key.push_back(v);
    }
    if (r > 0 && key < previous) problems.push_back(where + ": grid columns out of order");
    previous = std::move(key);
  }
  return problems;
}

}  // namespace qwh::cli
