#include "modeldelta/catalog.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "modeldelta/error.hpp"
#include "modeldelta/vocab.hpp"

namespace modeldelta {

namespace {

using C = CatalogColumn;

constexpr std::array<std::string_view, catalog_row_count> descriptions = {
    "Entities in left",
    "Entities in right",
    "Entities in both left and right (common entities)",
    "Entities changed from base to left",
    "Common entities changed by left without conflicts",
    "Common entities with conflicting attribute changes",
    "New entities in left",
    "New entities in left contained in entities that exist in base",
    "New entities in left contained in entities still present in right",
    "Entities deleted by left that are still present in right",
    "New entities in left that reference entities existing in base",
    "New entities in left that reference entities still present in right",
    "Base entities that reference new entities of left",
    "Entities still present in right that reference new entities of left",
    "Relations added by left between base entities",
    "Relations added by left between entities still present in right",
    "Relations deleted by left between base entities",
    "Relations deleted by left between entities still present in right",
    "Entities moved by left to another position in the containment tree",
    "Common entities moved by left but not by right",
    "Entities moved by left and right to different parents",
};

constexpr C e_only[] = {C::entities};
constexpr C e_attr[] = {C::entities, C::attributes};
constexpr C e_rel[] = {C::entities, C::relations};
constexpr C r_only[] = {C::relations};

std::span<const C> columns_for(int row) {
  if (row >= 4 && row <= 6) return e_attr;
  if (row >= 11 && row <= 14) return e_rel;
  if (row >= 15 && row <= 18) return r_only;
  return e_only;
}

template <typename Set>
std::vector<std::string> sorted(const Set& set) {
  std::vector<std::string> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Indexes the parts of a comparison the analyses need, keyed by IRI value.
class Context {
 public:
  Context(const ComparisonModel& c) : model_(c) {
    for (const auto& e : c.entries()) {
      const std::string_view p = e.statement.predicate.value();
      const std::string_view s = e.statement.subject.value();
      if (p == vocab::type) {
        exists_[s] |= e.origins.bits();
      } else if (p == vocab::contained_in && e.statement.object.is_iri()) {
        parents_[s].push_back({e.statement.object.value(), e.origins.bits()});
      } else if (vocab::is_attribute_predicate(p)) {
        attributes_.push_back(&e);
      } else if (vocab::is_relation_predicate(p) && e.statement.object.is_iri()) {
        relations_.push_back(&e);
      }
    }
  }

  std::size_t role(std::string_view label) const { return model_.require_label(label); }

  bool exists(std::string_view e, std::size_t role) const {
    auto it = exists_.find(e);
    return it != exists_.end() && ((it->second >> role) & 1u);
  }

  std::vector<std::string_view> entities_in(std::size_t role) const {
    std::vector<std::string_view> out;
    for (const auto& [e, mask] : exists_)
      if ((mask >> role) & 1u) out.push_back(e);
    return out;
  }

  std::optional<std::string_view> parent(std::string_view e, std::size_t role) const {
    auto it = parents_.find(e);
    if (it == parents_.end()) return std::nullopt;
    std::optional<std::string_view> found;
    for (const auto& [p, mask] : it->second) {
      if (!((mask >> role) & 1u)) continue;
      if (found)
        throw IntegrityError("entity <" + std::string(e) + "> has several containment parents in '" +
                             model_.labels()[role] + "'");
      found = p;
    }
    return found;
  }

  /// (entity, predicate) pairs whose value sets differ between the roles, for
  /// entities existing in both.
  std::set<AttributeKey> changed(std::size_t from, std::size_t to) const {
    std::set<AttributeKey> out;
    for (const auto* e : attributes_) {
      if (e->origins.contains(from) == e->origins.contains(to)) continue;
      const std::string& s = e->statement.subject.value();
      if (exists(s, from) && exists(s, to)) out.insert({s, e->statement.predicate.value()});
    }
    return out;
  }

  const std::vector<const ComparisonModel::Entry*>& relations() const { return relations_; }

 private:
  struct ParentLink {
    std::string_view parent;
    std::uint64_t mask;
  };

  const ComparisonModel& model_;
  std::unordered_map<std::string_view, std::uint64_t> exists_;
  std::unordered_map<std::string_view, std::vector<ParentLink>> parents_;
  std::vector<const ComparisonModel::Entry*> attributes_;
  std::vector<const ComparisonModel::Entry*> relations_;
};

struct Roles {
  std::size_t base, left, right;
};

Roles resolve(const Context& ctx, const ComparisonModel& c, const RoleBinding& roles) {
  validate_roles(c, roles);
  return {ctx.role(roles.base), ctx.role(roles.left), ctx.role(roles.right)};
}

std::vector<ChangedEntity> group_changes(const std::set<AttributeKey>& keys) {
  std::vector<ChangedEntity> out;
  for (const auto& k : keys) {
    if (out.empty() || out.back().entity != k.entity) out.push_back({k.entity, {}});
    out.back().predicates.push_back(k.predicate);
  }
  return out;
}

std::vector<AttributeKey> conflicts(const Context& ctx, const ComparisonModel& c, const Roles& r) {
  const auto to_left = ctx.changed(r.base, r.left);
  const auto to_right = ctx.changed(r.base, r.right);
  const auto left_vs_right = ctx.changed(r.left, r.right);
  std::vector<AttributeKey> out;
  for (const auto& k : to_left)
    if (to_right.contains(k) && left_vs_right.contains(k)) out.push_back(k);
  (void)c;
  return out;
}

NewEntities new_entities_impl(const Context& ctx, std::size_t in, std::size_t vs_base, std::size_t surviving,
                              const std::string& in_label) {
  NewEntities out;
  std::set<std::string> all, pre, surv;
  for (auto e : ctx.entities_in(in)) {
    if (ctx.exists(e, vs_base)) continue;
    all.emplace(e);
    const auto parent = ctx.parent(e, in);
    if (!parent) {
      out.diagnostics.push_back("new entity <" + std::string(e) + "> has no containment parent in '" +
                                in_label + "'");
      continue;
    }
    if (!ctx.exists(*parent, vs_base)) continue;
    pre.emplace(e);
    if (ctx.exists(*parent, surviving)) surv.emplace(e);
  }
  std::sort(out.diagnostics.begin(), out.diagnostics.end());
  out.all = sorted(all);
  out.in_preexisting = sorted(pre);
  out.in_surviving = sorted(surv);
  return out;
}

ReferenceAnalysis references_impl(const Context& ctx, const Roles& r) {
  auto is_new = [&](std::string_view e) { return ctx.exists(e, r.left) && !ctx.exists(e, r.base); };
  struct Acc {
    std::set<std::string> entities;
    std::vector<Statement> relations;
    EntityRelations finish() {
      std::sort(relations.begin(), relations.end());
      return {sorted(entities), std::move(relations)};
    }
  } a11, a12, a13, a14;
  for (const auto* e : ctx.relations()) {
    if (!e->origins.contains(r.left)) continue;
    const std::string& s = e->statement.subject.value();
    const std::string& o = e->statement.object.value();
    if (is_new(s) && ctx.exists(o, r.base)) {
      a11.entities.insert(s);
      a11.relations.push_back(e->statement);
      if (ctx.exists(o, r.right)) {
        a12.entities.insert(s);
        a12.relations.push_back(e->statement);
      }
    }
    if (ctx.exists(s, r.base) && is_new(o)) {
      a13.entities.insert(s);
      a13.relations.push_back(e->statement);
      if (ctx.exists(s, r.right)) {
        a14.entities.insert(s);
        a14.relations.push_back(e->statement);
      }
    }
  }
  return {a11.finish(), a12.finish(), a13.finish(), a14.finish()};
}

RelationDeltas relation_deltas_impl(const Context& ctx, const Roles& r) {
  RelationDeltas out;
  for (const auto* e : ctx.relations()) {
    const std::string& s = e->statement.subject.value();
    const std::string& o = e->statement.object.value();
    const bool in_base = e->origins.contains(r.base);
    const bool in_left = e->origins.contains(r.left);
    if (in_base == in_left) continue;
    if (!ctx.exists(s, r.base) || !ctx.exists(o, r.base)) continue;
    const bool surviving = ctx.exists(s, r.right) && ctx.exists(o, r.right);
    if (in_left) {
      out.added_between_preexisting.push_back(e->statement);
      if (surviving) out.added_between_surviving.push_back(e->statement);
    } else {
      out.deleted_between_preexisting.push_back(e->statement);
      if (surviving) out.deleted_between_surviving.push_back(e->statement);
    }
  }
  return out;
}

MovedEntities moved_impl(const Context& ctx, const Roles& r) {
  std::set<std::string> moved, only_left, conflicting;
  for (auto e : ctx.entities_in(r.base)) {
    if (!ctx.exists(e, r.left)) continue;
    const auto base_parent = ctx.parent(e, r.base);
    const auto left_parent = ctx.parent(e, r.left);
    if (base_parent == left_parent) continue;
    moved.emplace(e);
    if (!ctx.exists(e, r.right)) continue;
    const auto right_parent = ctx.parent(e, r.right);
    if (right_parent == base_parent) {
      only_left.emplace(e);
    } else if (right_parent != left_parent) {
      conflicting.emplace(e);
    }
  }
  return {sorted(moved), sorted(only_left), sorted(conflicting)};
}

CatalogRow make_row(int number) {
  CatalogRow row;
  row.number = number;
  row.description = std::string(descriptions[static_cast<std::size_t>(number - 1)]);
  return row;
}

void set_entities(CatalogRow& row, std::vector<std::string> entities) {
  row.entities = entities.size();
  row.detail.entities = std::move(entities);
}

void set_attributes(CatalogRow& row, std::vector<AttributeKey> keys) {
  row.attributes = keys.size();
  row.detail.attributes = std::move(keys);
}

void set_relations(CatalogRow& row, std::vector<Statement> relations) {
  row.relations = relations.size();
  row.detail.relations = std::move(relations);
}

/// Computes the rows listed in `wanted` (all when empty).
std::vector<CatalogRow> compute_rows(const ComparisonModel& c, const RoleBinding& roles,
                                     const std::set<int>& wanted, std::vector<std::string>* diagnostics) {
  const Context ctx(c);
  const Roles r = resolve(ctx, c, roles);
  auto want = [&](int lo, int hi) {
    if (wanted.empty()) return true;
    auto it = wanted.lower_bound(lo);
    return it != wanted.end() && *it <= hi;
  };

  std::map<int, CatalogRow> rows;
  for (int n = 1; n <= catalog_row_count; ++n)
    if (wanted.empty() || wanted.contains(n)) rows.emplace(n, make_row(n));
  auto row = [&](int n) -> CatalogRow* {
    auto it = rows.find(n);
    return it == rows.end() ? nullptr : &it->second;
  };

  if (want(1, 3)) {
    std::vector<std::string> left, right, common;
    for (auto e : ctx.entities_in(r.left)) {
      left.emplace_back(e);
      if (ctx.exists(e, r.right)) common.emplace_back(e);
    }
    for (auto e : ctx.entities_in(r.right)) right.emplace_back(e);
    for (auto* v : {&left, &right, &common}) std::sort(v->begin(), v->end());
    if (auto* x = row(1)) set_entities(*x, std::move(left));
    if (auto* x = row(2)) set_entities(*x, std::move(right));
    if (auto* x = row(3)) set_entities(*x, std::move(common));
  }

  if (want(4, 6)) {
    const auto to_left = ctx.changed(r.base, r.left);
    if (auto* x = row(4)) {
      std::set<std::string> ents;
      for (const auto& k : to_left) ents.insert(k.entity);
      set_entities(*x, sorted(ents));
      set_attributes(*x, {to_left.begin(), to_left.end()});
    }
    const auto conflict = conflicts(ctx, c, r);
    std::set<std::string> conflicted;
    for (const auto& k : conflict) conflicted.insert(k.entity);
    if (auto* x = row(5)) {
      std::set<std::string> ents;
      std::vector<AttributeKey> keys;
      for (const auto& k : to_left) {
        if (!ctx.exists(k.entity, r.right) || conflicted.contains(k.entity)) continue;
        ents.insert(k.entity);
        keys.push_back(k);
      }
      set_entities(*x, sorted(ents));
      set_attributes(*x, std::move(keys));
    }
    if (auto* x = row(6)) {
      set_entities(*x, sorted(conflicted));
      set_attributes(*x, conflict);
    }
  }

  if (want(7, 9)) {
    auto ne = new_entities_impl(ctx, r.left, r.base, r.right, roles.left);
    if (diagnostics) diagnostics->insert(diagnostics->end(), ne.diagnostics.begin(), ne.diagnostics.end());
    if (auto* x = row(7)) set_entities(*x, std::move(ne.all));
    if (auto* x = row(8)) set_entities(*x, std::move(ne.in_preexisting));
    if (auto* x = row(9)) set_entities(*x, std::move(ne.in_surviving));
  }

  if (auto* x = row(10)) {
    std::vector<std::string> out;
    for (auto e : ctx.entities_in(r.base))
      if (!ctx.exists(e, r.left) && ctx.exists(e, r.right)) out.emplace_back(e);
    std::sort(out.begin(), out.end());
    set_entities(*x, std::move(out));
  }

  if (want(11, 14)) {
    auto ra = references_impl(ctx, r);
    EntityRelations* parts[] = {&ra.new_to_preexisting, &ra.new_to_surviving, &ra.preexisting_to_new,
                                &ra.surviving_to_new};
    for (int n = 11; n <= 14; ++n) {
      if (auto* x = row(n)) {
        set_entities(*x, std::move(parts[n - 11]->entities));
        set_relations(*x, std::move(parts[n - 11]->relations));
      }
    }
  }

  if (want(15, 18)) {
    auto rd = relation_deltas_impl(ctx, r);
    std::vector<Statement>* parts[] = {&rd.added_between_preexisting, &rd.added_between_surviving,
                                       &rd.deleted_between_preexisting, &rd.deleted_between_surviving};
    for (int n = 15; n <= 18; ++n)
      if (auto* x = row(n)) set_relations(*x, std::move(*parts[n - 15]));
  }

  if (want(19, 21)) {
    auto mv = moved_impl(ctx, r);
    if (auto* x = row(19)) set_entities(*x, std::move(mv.moved));
    if (auto* x = row(20)) set_entities(*x, std::move(mv.moved_only_by_left));
    if (auto* x = row(21)) set_entities(*x, std::move(mv.conflicting));
  }

  std::vector<CatalogRow> out;
  for (auto& [n, rw] : rows) out.push_back(std::move(rw));
  return out;
}

}  // namespace

void validate_roles(const ComparisonModel& c, const RoleBinding& roles) {
  for (const auto* l : {&roles.base, &roles.left, &roles.right}) c.require_label(*l);
  if (roles.base == roles.left || roles.base == roles.right || roles.left == roles.right)
    throw UsageError("base, left and right must be three different models");
}

std::optional<std::size_t> CatalogRow::cell(CatalogColumn column) const {
  switch (column) {
    case CatalogColumn::entities: return entities;
    case CatalogColumn::attributes: return attributes;
    case CatalogColumn::relations: return relations;
  }
  return std::nullopt;
}

std::span<const CatalogColumn> catalog_columns(int row) {
  if (row < 1 || row > catalog_row_count) throw UsageError("catalog rows are numbered 1 to 21");
  return columns_for(row);
}

std::string_view catalog_description(int row) {
  if (row < 1 || row > catalog_row_count) throw UsageError("catalog rows are numbered 1 to 21");
  return descriptions[static_cast<std::size_t>(row - 1)];
}

std::vector<std::string> common_entities(const ComparisonModel& c, const RoleBinding& roles) {
  return std::move(compute_rows(c, roles, {3}, nullptr).front().detail.entities);
}

std::vector<ChangedEntity> changed_entities(const ComparisonModel& c, std::string_view from,
                                            std::string_view to) {
  const Context ctx(c);
  return group_changes(ctx.changed(ctx.role(from), ctx.role(to)));
}

std::vector<AttributeKey> conflicting_attributes(const ComparisonModel& c, const RoleBinding& roles) {
  const Context ctx(c);
  return conflicts(ctx, c, resolve(ctx, c, roles));
}

NewEntities new_entities(const ComparisonModel& c, std::string_view in, std::string_view vs_base,
                         std::string_view surviving_in) {
  const Context ctx(c);
  return new_entities_impl(ctx, ctx.role(in), ctx.role(vs_base), ctx.role(surviving_in), std::string(in));
}

std::vector<std::string> deleted_still_present(const ComparisonModel& c, const RoleBinding& roles) {
  return std::move(compute_rows(c, roles, {10}, nullptr).front().detail.entities);
}

ReferenceAnalysis reference_analyses(const ComparisonModel& c, const RoleBinding& roles) {
  const Context ctx(c);
  return references_impl(ctx, resolve(ctx, c, roles));
}

RelationDeltas relation_deltas(const ComparisonModel& c, const RoleBinding& roles) {
  const Context ctx(c);
  return relation_deltas_impl(ctx, resolve(ctx, c, roles));
}

MovedEntities moved_entities(const ComparisonModel& c, const RoleBinding& roles) {
  const Context ctx(c);
  return moved_impl(ctx, resolve(ctx, c, roles));
}

CatalogReport run_catalog(const ComparisonModel& c, const RoleBinding& roles) {
  CatalogReport report;
  report.roles = roles;
  report.rows = compute_rows(c, roles, {}, &report.diagnostics);
  return report;
}

CatalogRow run_catalog_row(const ComparisonModel& c, const RoleBinding& roles, int row) {
  if (row < 1 || row > catalog_row_count) throw UsageError("catalog rows are numbered 1 to 21");
  return std::move(compute_rows(c, roles, {row}, nullptr).front());
}

}  // namespace modeldelta
