#include <algorithm>

#include "json.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/query.hpp"
#include "render_util.hpp"

namespace modeldelta {

OutputFormat parse_output_format(std::string_view name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw UsageError("unknown output format '" + std::string(name) + "' (expected table, csv or json)");
}

std::string render(const BindingTable& table, OutputFormat format) {
  std::vector<std::string> header;
  for (const auto& c : table.columns) header.push_back(table.is_count ? c : "?" + c);
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (const auto& t : row) line.push_back(table.is_count ? t.value() : t.to_string());
    cells.push_back(std::move(line));
  }

  switch (format) {
    case OutputFormat::table:
      return detail::aligned_table(header, cells, {});
    case OutputFormat::csv:
      return detail::csv_table(header, cells);
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      j["columns"] = table.columns;
      auto rows = nlohmann::ordered_json::array();
      if (table.is_count) {
        rows.push_back(nlohmann::ordered_json::array({table.count()}));
      } else {
        for (const auto& line : cells) rows.push_back(line);
      }
      j["rows"] = std::move(rows);
      return j.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace modeldelta
