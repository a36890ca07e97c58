#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wordorder::cli {

using Cell = nlohmann::ordered_json;

enum class Format { csv, json };

/// Shortest round-trip decimal form; negative zero prints as 0.
std::string format_number(double value);

/// One tabular result plus summary fields. Cells are JSON scalars so the
/// same table renders as CSV or as a JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
  void note(std::string key, Cell value) {
    summary.emplace_back(std::move(key), std::move(value));
  }
};

/// CSV: header, rows, then "# key: value" summary lines.
void render(const Table& table, Format format, std::ostream& out);

std::string render_cell(const Cell& cell);

}  // namespace wordorder::cli
