#include "output.hpp"

#include <charconv>
#include <cmath>

namespace wordorder::cli {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Cell json_cell(const Cell& cell) {
  // JSON has no infinities; keep them readable as strings.
  if (cell.is_number_float() && !std::isfinite(cell.get<double>())) {
    return format_number(cell.get<double>());
  }
  return cell;
}

}  // namespace

std::string render_cell(const Cell& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_number_integer()) return cell.dump();
  if (cell.is_number_float()) return format_number(cell.get<double>());
  if (cell.is_null()) return "";
  if (cell.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      if (i > 0) out += ' ';
      out += render_cell(cell[i]);
    }
    return out;
  }
  return cell.dump();
}

void render(const Table& table, Format format, std::ostream& out) {
  if (format == Format::json) {
    Cell doc;
    doc["columns"] = table.columns;
    auto rows = Cell::array();
    for (const auto& row : table.rows) {
      auto r = Cell::array();
      for (const auto& cell : row) r.push_back(json_cell(cell));
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    auto summary = Cell::object();
    for (const auto& [key, value] : table.summary) summary[key] = json_cell(value);
    doc["summary"] = std::move(summary);
    out << doc.dump(2) << '\n';
    return;
  }
  if (!table.columns.empty()) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << quote_if_needed(table.columns[i]);
    }
    out << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << quote_if_needed(render_cell(row[i]));
    }
    out << '\n';
  }
  for (const auto& [key, value] : table.summary) {
    out << "# " << key << ": " << render_cell(value) << '\n';
  }
}

}  // namespace wordorder::cli
