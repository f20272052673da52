#include <algorithm>
#include <charconv>
#include <string>
#include <unordered_map>
#include <utility>

#include "modeldelta/catalog.hpp"
#include "modeldelta/error.hpp"

namespace modeldelta {

namespace {

struct Embedded {
  std::string_view name;
  std::string_view text;
};

constexpr Embedded embedded[] = {
#include "catalog_queries.inc"
};

CatalogColumn column_named(std::string_view s, std::string_view file) {
  if (s == "entities") return CatalogColumn::entities;
  if (s == "attributes") return CatalogColumn::attributes;
  if (s == "relations") return CatalogColumn::relations;
  throw ValidationError("catalog query " + std::string(file) + " names unknown column '" + std::string(s) + "'");
}

// Names look like row04_attributes.
CatalogQuery load(const Embedded& e) {
  const auto bad = [&] { return ValidationError("catalog query name '" + std::string(e.name) + "' is malformed"); };
  if (e.name.size() < 7 || e.name.substr(0, 3) != "row" || e.name[5] != '_') throw bad();
  int row = 0;
  auto [ptr, ec] = std::from_chars(e.name.data() + 3, e.name.data() + 5, row);
  if (ec != std::errc() || ptr != e.name.data() + 5 || row < 1 || row > catalog_row_count) throw bad();
  const CatalogColumn column = column_named(e.name.substr(6), e.name);
  const auto cols = catalog_columns(row);
  if (std::find(cols.begin(), cols.end(), column) == cols.end()) throw bad();
  try {
    return {row, column, e.name, parse_query(e.text)};
  } catch (const ParseError& err) {
    throw ValidationError("catalog query " + std::string(e.name) + ": " + err.what());
  }
}

std::vector<CatalogQuery> load_all() {
  std::vector<CatalogQuery> out;
  for (const auto& e : embedded) out.push_back(load(e));
  for (int row = 1; row <= catalog_row_count; ++row)
    for (auto column : catalog_columns(row))
      if (std::none_of(out.begin(), out.end(),
                       [&](const CatalogQuery& q) { return q.row == row && q.column == column; }))
        throw ValidationError("no catalog query for row " + std::to_string(row));
  return out;
}

}  // namespace

const std::vector<CatalogQuery>& catalog_queries() {
  static const std::vector<CatalogQuery> queries = load_all();
  return queries;
}

CatalogReport run_catalog_queries(const ComparisonModel& c, const RoleBinding& roles) {
  validate_roles(c, roles);
  const std::unordered_map<std::string, std::string> renames = {
      {"base", roles.base}, {"left", roles.left}, {"right", roles.right}};
  const QueryIndex index(c);

  CatalogReport report;
  report.roles = roles;
  for (int n = 1; n <= catalog_row_count; ++n) {
    CatalogRow row;
    row.number = n;
    row.description = std::string(catalog_description(n));
    report.rows.push_back(std::move(row));
  }
  for (const auto& q : catalog_queries()) {
    const std::size_t count = evaluate(index, rename_labels(q.query, renames)).rows.size();
    auto& row = report.rows[static_cast<std::size_t>(q.row - 1)];
    switch (q.column) {
      case CatalogColumn::entities: row.entities = count; break;
      case CatalogColumn::attributes: row.attributes = count; break;
      case CatalogColumn::relations: row.relations = count; break;
    }
  }
  return report;
}

}  // namespace modeldelta
