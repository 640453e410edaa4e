#pragma once

// Minimal CSV tables: '#'-prefixed metadata lines, one header line, then
// rows. Floats are written with 17 significant digits and lines end in '\n'.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qwh::cli {

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;  // "# key=value"
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
  /// Index of a column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string format_double(double value);
std::string format_count(std::size_t value);

void write_csv(std::ostream& os, const CsvTable& table);
/// Throws std::runtime_error on malformed input.
CsvTable read_csv(std::istream& is);

/// Problems found: header mismatch, ragged rows, unparsable numeric cells,
/// and grid columns that are not in non-decreasing lexicographic order.
/// numeric_columns empty means every column except those listed in text_columns.
std::vector<std::string> schema_problems(const CsvTable& table, const std::vector<std::string>& expected_columns,
                                         const std::vector<std::string>& grid_columns,
                                         const std::vector<std::string>& text_columns = {});

}  // namespace qwh::cli
