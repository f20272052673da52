#include <string>
#include <vector>

#include "json.hpp"
#include "modeldelta/catalog.hpp"
#include "render_util.hpp"

namespace modeldelta {

namespace {

using nlohmann::ordered_json;

std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

ordered_json json_cell(const std::optional<std::size_t>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string iri(const std::string& value) { return "<" + value + ">"; }

}  // namespace

std::string render_catalog(const CatalogReport& report, OutputFormat format) {
  const std::vector<std::string> header = {"#", "Analysis", "Entities", "Attributes", "Relations"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : report.rows)
    rows.push_back({std::to_string(r.number), r.description, cell(r.entities), cell(r.attributes), cell(r.relations)});

  switch (format) {
    case OutputFormat::table:
      return detail::aligned_table(header, rows, {true, false, true, true, true});
    case OutputFormat::csv:
      return detail::csv_table({"row", "description", "entities", "attributes", "relations"}, rows);
    case OutputFormat::json: {
      ordered_json j;
      j["roles"] = {{"base", report.roles.base}, {"left", report.roles.left}, {"right", report.roles.right}};
      auto arr = ordered_json::array();
      for (const auto& r : report.rows)
        arr.push_back({{"row", r.number},
                       {"description", r.description},
                       {"entities", json_cell(r.entities)},
                       {"attributes", json_cell(r.attributes)},
                       {"relations", json_cell(r.relations)}});
      j["rows"] = std::move(arr);
      j["diagnostics"] = report.diagnostics;
      return j.dump(2) + "\n";
    }
  }
  return {};
}

std::string render_catalog_row(const CatalogRow& row, OutputFormat format) {
  const auto& d = row.detail;
  switch (format) {
    case OutputFormat::table: {
      std::string out = "Row " + std::to_string(row.number) + ": " + row.description + "\n";
      if (row.entities) {
        out += "\nEntities (" + std::to_string(*row.entities) + ")\n";
        for (const auto& e : d.entities) out += "  " + iri(e) + "\n";
      }
      if (row.attributes) {
        out += "\nAttributes (" + std::to_string(*row.attributes) + ")\n";
        for (const auto& a : d.attributes) out += "  " + iri(a.entity) + " " + iri(a.predicate) + "\n";
      }
      if (row.relations) {
        out += "\nRelations (" + std::to_string(*row.relations) + ")\n";
        for (const auto& s : d.relations) out += "  " + s.to_string() + "\n";
      }
      return out;
    }
    case OutputFormat::csv: {
      std::vector<std::vector<std::string>> rows;
      for (const auto& e : d.entities) rows.push_back({"entity", iri(e), "", ""});
      for (const auto& a : d.attributes) rows.push_back({"attribute", iri(a.entity), iri(a.predicate), ""});
      for (const auto& s : d.relations)
        rows.push_back({"relation", s.subject.to_string(), s.predicate.to_string(), s.object.to_string()});
      return detail::csv_table({"kind", "subject", "predicate", "object"}, rows);
    }
    case OutputFormat::json: {
      ordered_json j;
      j["row"] = row.number;
      j["description"] = row.description;
      j["entities"] = json_cell(row.entities);
      j["attributes"] = json_cell(row.attributes);
      j["relations"] = json_cell(row.relations);
      auto items = ordered_json::object();
      if (row.entities) items["entities"] = d.entities;
      if (row.attributes) {
        auto a = ordered_json::array();
        for (const auto& k : d.attributes) a.push_back({k.entity, k.predicate});
        items["attributes"] = std::move(a);
      }
      if (row.relations) {
        auto a = ordered_json::array();
        for (const auto& s : d.relations)
          a.push_back({s.subject.value(), s.predicate.value(), s.object.value()});
        items["relations"] = std::move(a);
      }
      j["items"] = std::move(items);
      return j.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace modeldelta
