#pragma once

// Alignment-viability analyses over a three-way comparison.
//
// Roles: base (common ancestor), left (the upstream revision) and right (the
// locally tailored derivative). Terms used throughout:
//
//   exists(e, M)   (e, m:type, ?) is in M
//   attribute      statement whose predicate starts with a:
//   relation       statement whose predicate starts with r: and whose object
//                  is an IRI
//   parent(e, M)   object of (e, m:containedIn, ?) in M, if any
//
// Every analysis is also shipped as DeltaQuery text (queries/catalog/*.dq);
// run_catalog_queries evaluates those and must agree with run_catalog.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modeldelta/compare.hpp"
#include "modeldelta/query.hpp"

namespace modeldelta {

struct RoleBinding {
  std::string base;
  std::string left;
  std::string right;
};

/// Throws UsageError unless the three labels are distinct and present.
void validate_roles(const ComparisonModel& c, const RoleBinding& roles);

struct AttributeKey {
  std::string entity;     ///< entity IRI value
  std::string predicate;  ///< attribute predicate IRI value
  friend auto operator<=>(const AttributeKey&, const AttributeKey&) = default;
};

struct ChangedEntity {
  std::string entity;
  std::vector<std::string> predicates;  ///< sorted, each with differing value sets
  friend bool operator==(const ChangedEntity&, const ChangedEntity&) = default;
};

/// Entity IRI values are returned sorted bytewise throughout.
std::vector<std::string> common_entities(const ComparisonModel& c, const RoleBinding& roles);

/// Entities existing in both roles with at least one attribute predicate whose
/// value set differs between them.
std::vector<ChangedEntity> changed_entities(const ComparisonModel& c, std::string_view from,
                                            std::string_view to);

/// (entity, predicate) changed base->left and base->right with left and right
/// value sets still different.
std::vector<AttributeKey> conflicting_attributes(const ComparisonModel& c, const RoleBinding& roles);

struct NewEntities {
  std::vector<std::string> all;              ///< exists in `in`, not in `vs_base`
  std::vector<std::string> in_preexisting;   ///< parent in `in` exists in `vs_base`
  std::vector<std::string> in_surviving;     ///< ...and also exists in `surviving_in`
  std::vector<std::string> diagnostics;      ///< new entities without a parent
};

/// Throws IntegrityError for an entity with several parents in `in`.
NewEntities new_entities(const ComparisonModel& c, std::string_view in, std::string_view vs_base,
                         std::string_view surviving_in);

/// exists in base, not in left, exists in right.
std::vector<std::string> deleted_still_present(const ComparisonModel& c, const RoleBinding& roles);

struct EntityRelations {
  std::vector<std::string> entities;
  std::vector<Statement> relations;
};

struct ReferenceAnalysis {
  EntityRelations new_to_preexisting;  ///< new-in-left sources, targets exist in base
  EntityRelations new_to_surviving;    ///< ...targets also exist in right
  EntityRelations preexisting_to_new;  ///< base sources, new-in-left targets
  EntityRelations surviving_to_new;    ///< ...sources also exist in right
};

/// Relation statements are taken from left.
ReferenceAnalysis reference_analyses(const ComparisonModel& c, const RoleBinding& roles);

struct RelationDeltas {
  std::vector<Statement> added_between_preexisting;
  std::vector<Statement> added_between_surviving;
  std::vector<Statement> deleted_between_preexisting;
  std::vector<Statement> deleted_between_surviving;
};

RelationDeltas relation_deltas(const ComparisonModel& c, const RoleBinding& roles);

struct MovedEntities {
  std::vector<std::string> moved;               ///< parent differs base vs left
  std::vector<std::string> moved_only_by_left;  ///< ...common, and not moved by right
  std::vector<std::string> conflicting;         ///< moved by both to different parents
};

/// A missing parent counts as a distinct value. Throws IntegrityError for an
/// entity with several parents in one role.
MovedEntities moved_entities(const ComparisonModel& c, const RoleBinding& roles);

inline constexpr int catalog_row_count = 21;

enum class CatalogColumn { entities, attributes, relations };

struct RowDetail {
  std::vector<std::string> entities;
  std::vector<AttributeKey> attributes;
  std::vector<Statement> relations;
};

struct CatalogRow {
  int number = 0;
  std::string description;
  std::optional<std::size_t> entities;
  std::optional<std::size_t> attributes;
  std::optional<std::size_t> relations;
  RowDetail detail;

  std::optional<std::size_t> cell(CatalogColumn column) const;
};

struct CatalogReport {
  RoleBinding roles;
  std::vector<CatalogRow> rows;  ///< rows 1..21 in order
  std::vector<std::string> diagnostics;
};

/// Columns defined for a row (1-based); others are always empty.
std::span<const CatalogColumn> catalog_columns(int row);
std::string_view catalog_description(int row);

CatalogReport run_catalog(const ComparisonModel& c, const RoleBinding& roles);

/// A single row with its element lists. Throws UsageError for row outside 1..21.
CatalogRow run_catalog_row(const ComparisonModel& c, const RoleBinding& roles, int row);

struct CatalogQuery {
  int row;
  CatalogColumn column;
  std::string_view name;  ///< file stem, e.g. row04_attributes
  Query query;            ///< written against labels base, left, right
};

/// One query per defined cell, parsed from the shipped .dq files.
const std::vector<CatalogQuery>& catalog_queries();

/// Counts from the shipped queries: each cell is the number of DISTINCT rows
/// its query returns. Element lists are left empty.
CatalogReport run_catalog_queries(const ComparisonModel& c, const RoleBinding& roles);

std::string render_catalog(const CatalogReport& report, OutputFormat format);
std::string render_catalog_row(const CatalogRow& row, OutputFormat format);

}  // namespace modeldelta
