#pragma once

// Synthetic three-way fixtures (base, left, right) with a ledger of every
// edit applied. The generator is specified in docs/fixture-generator.md so
// that other implementations can reproduce it draw for draw.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modeldelta/catalog.hpp"
#include "modeldelta/triples.hpp"

namespace modeldelta {

struct BranchRates {
  double attribute_edit_rate = 0;
  double delete_rate = 0;
  double add_rate = 0;
  double move_rate = 0;
  double relation_add_rate = 0;
  double relation_delete_rate = 0;
  /// Delete whole subtrees instead of re-parenting orphans to the nearest
  /// surviving ancestor.
  bool cascade_deletes = false;

  friend bool operator==(const BranchRates&, const BranchRates&) = default;
};

struct FixtureSpec {
  std::uint64_t seed = 1;
  std::size_t entity_count = 100;
  double attrs_per_entity = 2.0;  ///< mean attribute statements per entity, >= 1
  std::size_t relation_count = 100;
  BranchRates left;
  BranchRates right;
  /// Of the attributes left edits on entities right keeps: the share right
  /// edits differently, and the share right edits identically.
  double conflict_rate = 0;
  double convergent_rate = 0;
  /// Right also deletes every entity left deletes.
  bool right_deletes_left_deletions = false;

  /// Throws ValidationError for rates outside [0,1] or non-positive sizes.
  void validate() const;

  /// About 2100 entities, 5000 attributes and 4100 relations.
  static FixtureSpec full_scale();

  friend bool operator==(const FixtureSpec&, const FixtureSpec&) = default;
};

/// Missing keys take the defaults above; unknown keys are rejected.
FixtureSpec parse_fixture_spec(std::string_view json);
std::string fixture_spec_json(const FixtureSpec& spec);

// Entities in the ledger are IRI values (e:E0001), as are parents.

struct PlacedEntity {
  std::string entity;
  std::optional<std::string> parent;
  friend bool operator==(const PlacedEntity&, const PlacedEntity&) = default;
};

struct MovedEntity {
  std::string entity;
  std::optional<std::string> from;  ///< base parent
  std::optional<std::string> to;    ///< parent in the branch
  friend bool operator==(const MovedEntity&, const MovedEntity&) = default;
};

struct AttributeEdit {
  std::string entity;
  std::string predicate;
  std::vector<std::string> before;  ///< sorted value set in base
  std::vector<std::string> after;   ///< sorted value set in the branch
  friend bool operator==(const AttributeEdit&, const AttributeEdit&) = default;
};

/// All lists sorted.
struct BranchLedger {
  std::vector<std::string> deleted;       ///< base entities absent from the branch
  std::vector<PlacedEntity> added;        ///< new entities with their parents
  std::vector<MovedEntity> moved;         ///< kept base entities whose parent changed
  std::vector<AttributeEdit> attribute_edits;
  std::vector<Statement> added_relations;    ///< relations not in base
  std::vector<Statement> deleted_relations;  ///< base relations absent from the branch
  friend bool operator==(const BranchLedger&, const BranchLedger&) = default;
};

struct ChangeLedger {
  std::vector<PlacedEntity> base_entities;
  std::vector<Statement> base_relations;
  BranchLedger left;
  BranchLedger right;
  /// (entity, predicate) edited by both branches with different results.
  std::vector<AttributeKey> conflicts;
  friend bool operator==(const ChangeLedger&, const ChangeLedger&) = default;
};

struct Fixture {
  ModelGraph base;
  ModelGraph left;
  ModelGraph right;
  ChangeLedger ledger;
};

/// Throws ValidationError when the spec is invalid or a model comes out empty.
Fixture generate_fixture(const FixtureSpec& spec);

/// The 21-row report implied by the ledger alone, for roles base/left/right.
CatalogReport ledger_report(const ChangeLedger& ledger);

/// Ledger plus its implied report counts.
std::string ledger_json(const ChangeLedger& ledger);

}  // namespace modeldelta
