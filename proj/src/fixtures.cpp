#include "modeldelta/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "json.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/vocab.hpp"

namespace modeldelta {

namespace {

using nlohmann::ordered_json;

constexpr std::array<std::string_view, 6> entity_types = {"Activity", "Product", "Role",
                                                          "Topic", "Discipline", "ProcessModule"};
constexpr std::array<std::string_view, 5> relation_predicates = {"r:produces", "r:uses", "r:responsibleFor",
                                                                 "r:refersTo", "r:dependsOn"};
constexpr std::array<std::string_view, 3> optional_attributes = {"a:Description", "a:Purpose", "a:Comment"};
constexpr std::string_view name_attribute = "a:Name";
constexpr std::string_view keyword_attribute = "a:Keyword";

constexpr std::array<std::string_view, 48> vocabulary = {
    "system",   "design",    "software", "hardware", "project",  "plan",     "review",   "quality",
    "test",     "module",    "interface", "element", "process",  "product",  "role",     "change",
    "request",  "risk",      "contract", "offer",    "customer", "supplier", "safety",   "security",
    "concept",  "migration", "logistics", "training", "evaluation", "report", "status",  "decision",
    "phase",    "milestone", "manual",   "archive",  "unit",     "component", "architecture", "specification",
    "integration", "delivery", "acceptance", "audit", "measure", "progress",  "order",    "tailoring",
};

// Appended when a conflicting edit cannot otherwise be made to differ.
constexpr std::string_view fallback_word = "revised";

/// mt19937_64 with raw outputs mapped to doubles; see docs/fixture-generator.md.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(k, n - 1);
  }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

using Values = std::vector<std::string>;
using Attributes = std::map<std::string, Values>;
using Relation = std::tuple<std::string, std::string, std::string>;

struct EntityState {
  std::string type;
  std::optional<std::string> parent;
  Attributes attributes;
};

struct ModelState {
  std::map<std::string, EntityState> entities;
  std::set<Relation> relations;
};

/// Value set as it appears in the graph: sorted, duplicates dropped.
Values sorted_values(Values v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string pad(std::size_t k, std::size_t width) {
  std::string s = std::to_string(k);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::size_t digits(std::size_t n) {
  std::size_t d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

std::string words(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += vocabulary[rng.below(vocabulary.size())];
  }
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto j = std::min(s.find(' ', i), s.size());
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::string join_words(const std::vector<std::string>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ' ';
    out += w[i];
  }
  return out;
}

std::string fresh_word(Rng& rng, const Values& taken) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string w(vocabulary[rng.below(vocabulary.size())]);
    if (std::find(taken.begin(), taken.end(), w) == taken.end()) return w;
  }
  return std::string(fallback_word);
}

Attributes make_attributes(Rng& rng, double mean) {
  Attributes attrs;
  attrs[std::string(name_attribute)] = {words(rng, 2)};
  const double extra = mean - 1.0;
  std::size_t k = static_cast<std::size_t>(std::floor(extra));
  if (rng.chance(extra - std::floor(extra))) ++k;
  std::array<std::string_view, 3> order = optional_attributes;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t j = 0; j < k; ++j) {
    if (j < order.size()) {
      const std::size_t len = order[j] == "a:Description" ? 4 + rng.below(7)
                              : order[j] == "a:Purpose"   ? 3 + rng.below(4)
                                                          : 2 + rng.below(4);
      attrs[std::string(order[j])] = {words(rng, len)};
    } else {
      auto& kw = attrs[std::string(keyword_attribute)];
      kw.push_back(fresh_word(rng, kw));
    }
  }
  return attrs;
}

/// One random edit; the value set always changes.
void edit_values(Rng& rng, Values& values, const std::string& predicate) {
  if (predicate == keyword_attribute) {
    if (values.size() > 1 && rng.below(2) == 1) {
      values.erase(values.begin() + static_cast<std::ptrdiff_t>(rng.below(values.size())));
    } else {
      values.push_back(fresh_word(rng, values));
    }
    return;
  }
  auto w = split_words(values.front());
  std::size_t op = rng.below(3);
  if (op == 2 && w.size() < 2) op = 0;
  if (op == 0) {
    const std::size_t pos = rng.below(w.size() + 1);
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), std::string(vocabulary[rng.below(vocabulary.size())]));
  } else if (op == 1) {
    const std::size_t i = rng.below(w.size());
    w[i] = fresh_word(rng, {w[i]});
  } else {
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(rng.below(w.size())));
  }
  values.front() = join_words(w);
}

std::vector<std::string> entity_list(const ModelState& m) {
  std::vector<std::string> out;
  for (const auto& [e, st] : m.entities) out.push_back(e);
  return out;
}

std::set<std::string> subtree(const ModelState& m, const std::string& root) {
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [e, st] : m.entities)
    if (st.parent) children[*st.parent].push_back(e);
  std::set<std::string> out = {root};
  std::vector<std::string> stack = {root};
  while (!stack.empty()) {
    const auto cur = stack.back();
    stack.pop_back();
    for (const auto& c : children[cur])
      if (out.insert(c).second) stack.push_back(c);
  }
  return out;
}

ModelState generate_base(Rng& rng, const FixtureSpec& spec, std::size_t width) {
  ModelState m;
  const std::size_t n = spec.entity_count;
  const std::size_t roots = std::min(n, 1 + n / 500);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::string(vocab::entity_prefix) + "E" + pad(i, width));
  for (std::size_t i = 0; i < n; ++i) {
    EntityState st;
    st.type = std::string(entity_types[rng.below(entity_types.size())]);
    if (i >= roots) st.parent = ids[rng.below(i)];
    st.attributes = make_attributes(rng, spec.attrs_per_entity);
    m.entities.emplace(ids[i], std::move(st));
  }
  std::size_t attempts = 20 * spec.relation_count + 100;
  while (m.relations.size() < spec.relation_count && attempts-- > 0) {
    const std::size_t s = rng.below(n);
    const std::size_t o = rng.below(n);
    const std::size_t r = rng.below(relation_predicates.size());
    if (s == o) continue;
    m.relations.emplace(ids[s], std::string(relation_predicates[r]), ids[o]);
  }
  if (m.relations.size() < spec.relation_count)
    throw ValidationError("relationCount " + std::to_string(spec.relation_count) +
                          " cannot be placed among " + std::to_string(n) + " entities");
  return m;
}

struct Derivation {
  const FixtureSpec& spec;
  const ModelState& base;
  Rng& rng;
  std::size_t width;
};

void delete_entities(Derivation& d, ModelState& m, const BranchRates& rates, const std::set<std::string>& forced) {
  std::set<std::string> doomed;
  for (const auto& [e, st] : d.base.entities) {
    const bool pick = d.rng.chance(rates.delete_rate);
    if (pick || forced.contains(e)) doomed.insert(e);
  }
  if (rates.cascade_deletes) {
    std::set<std::string> closed;
    for (const auto& e : doomed) {
      const auto sub = subtree(m, e);
      closed.insert(sub.begin(), sub.end());
    }
    doomed = std::move(closed);
  }
  const auto before = m.entities;
  for (const auto& e : doomed) m.entities.erase(e);
  for (auto& [e, st] : m.entities) {
    while (st.parent && doomed.contains(*st.parent)) st.parent = before.at(*st.parent).parent;
  }
  std::erase_if(m.relations, [&](const Relation& r) {
    return doomed.contains(std::get<0>(r)) || doomed.contains(std::get<2>(r));
  });
}

void move_entities(Derivation& d, ModelState& m, const BranchRates& rates) {
  for (const auto& e : entity_list(m)) {
    if (!d.rng.chance(rates.move_rate)) continue;
    const auto sub = subtree(m, e);
    const auto& current = m.entities.at(e).parent;
    std::vector<std::string> candidates;
    for (const auto& [c, st] : m.entities)
      if (!sub.contains(c) && c != current) candidates.push_back(c);
    if (candidates.empty()) continue;
    m.entities.at(e).parent = candidates[d.rng.below(candidates.size())];
  }
}

void edit_attributes(Derivation& d, ModelState& m, const BranchRates& rates) {
  for (auto& [e, st] : m.entities) {
    if (!d.rng.chance(rates.attribute_edit_rate)) continue;
    std::vector<std::string> preds;
    for (const auto& [p, v] : st.attributes) preds.push_back(p);
    std::size_t count = d.rng.chance(0.25) ? 2 : 1;
    count = std::min(count, preds.size());
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(preds[i], preds[i + d.rng.below(preds.size() - i)]);
      edit_values(d.rng, st.attributes.at(preds[i]), preds[i]);
    }
  }
}

/// Right's reaction to left's attribute edits: a differing edit or a copy.
void react_to_left(Derivation& d, ModelState& right, const ModelState& left) {
  for (const auto& [e, lst] : left.entities) {
    auto base_it = d.base.entities.find(e);
    auto right_it = right.entities.find(e);
    if (base_it == d.base.entities.end() || right_it == right.entities.end()) continue;
    for (const auto& [p, lvalues] : lst.attributes) {
      const Values base_set = sorted_values(base_it->second.attributes.at(p));
      const Values left_set = sorted_values(lvalues);
      if (left_set == base_set) continue;
      const double u = d.rng.uniform();
      if (u < d.spec.conflict_rate) {
        Values candidate;
        bool ok = false;
        for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
          candidate = lvalues;
          edit_values(d.rng, candidate, p);
          const Values cs = sorted_values(candidate);
          ok = cs != base_set && cs != left_set;
        }
        if (!ok) {
          candidate = lvalues;
          if (p == keyword_attribute) {
            candidate.push_back(std::string(fallback_word));
          } else {
            candidate.front() += " " + std::string(fallback_word);
          }
        }
        right_it->second.attributes.at(p) = std::move(candidate);
      } else if (u < d.spec.conflict_rate + d.spec.convergent_rate) {
        right_it->second.attributes.at(p) = lvalues;
      }
    }
  }
}

void add_entities(Derivation& d, ModelState& m, const BranchRates& rates, char prefix) {
  const auto count = static_cast<std::size_t>(std::llround(rates.add_rate * static_cast<double>(d.spec.entity_count)));
  const double per = static_cast<double>(d.spec.relation_count) / static_cast<double>(d.spec.entity_count);
  auto current = entity_list(m);
  for (std::size_t k = 0; k < count; ++k) {
    const std::string id = std::string(vocab::entity_prefix) + prefix + pad(k, d.width);
    EntityState st;
    if (!current.empty()) st.parent = current[d.rng.below(current.size())];
    st.type = std::string(entity_types[d.rng.below(entity_types.size())]);
    st.attributes = make_attributes(d.rng, d.spec.attrs_per_entity);
    std::size_t links = static_cast<std::size_t>(std::floor(per));
    if (d.rng.chance(per - std::floor(per))) ++links;
    for (std::size_t j = 0; j < links && !current.empty(); ++j) {
      const std::string& other = current[d.rng.below(current.size())];
      const bool outgoing = d.rng.chance(0.5);
      const std::string r(relation_predicates[d.rng.below(relation_predicates.size())]);
      if (outgoing) {
        m.relations.emplace(id, r, other);
      } else {
        m.relations.emplace(other, r, id);
      }
    }
    m.entities.emplace(id, std::move(st));
    current.push_back(id);
  }
}

void delete_relations(Derivation& d, ModelState& m, const BranchRates& rates) {
  for (const auto& r : d.base.relations) {
    auto it = m.relations.find(r);
    if (it == m.relations.end()) continue;
    if (d.rng.chance(rates.relation_delete_rate)) m.relations.erase(it);
  }
}

void add_relations(Derivation& d, ModelState& m, const BranchRates& rates) {
  const auto count =
      static_cast<std::size_t>(std::llround(rates.relation_add_rate * static_cast<double>(d.spec.relation_count)));
  const auto current = entity_list(m);
  if (current.size() < 2) return;
  std::size_t added = 0;
  std::size_t attempts = 20 * count + 100;
  while (added < count && attempts-- > 0) {
    const std::size_t s = d.rng.below(current.size());
    const std::size_t o = d.rng.below(current.size());
    const std::string r(relation_predicates[d.rng.below(relation_predicates.size())]);
    if (s == o) continue;
    Relation rel{current[s], r, current[o]};
    if (d.base.relations.contains(rel)) continue;
    if (m.relations.insert(std::move(rel)).second) ++added;
  }
}

ModelState derive(Derivation& d, const BranchRates& rates, char prefix, const std::set<std::string>& forced,
                  const ModelState* left) {
  ModelState m = d.base;
  delete_entities(d, m, rates, forced);
  move_entities(d, m, rates);
  edit_attributes(d, m, rates);
  if (left) react_to_left(d, m, *left);
  add_entities(d, m, rates, prefix);
  delete_relations(d, m, rates);
  add_relations(d, m, rates);
  return m;
}

ModelGraph to_graph(const ModelState& m, const std::string& label) {
  std::vector<Statement> out;
  const Term type = Term::iri(std::string(vocab::type));
  const Term contained = Term::iri(std::string(vocab::contained_in));
  for (const auto& [e, st] : m.entities) {
    const Term subject = Term::iri(e);
    out.push_back({subject, type, Term::literal(st.type)});
    if (st.parent) out.push_back({subject, contained, Term::iri(*st.parent)});
    for (const auto& [p, values] : st.attributes) {
      const Term pred = Term::iri(p);
      for (const auto& v : values) out.push_back({subject, pred, Term::literal(v)});
    }
  }
  for (const auto& [s, p, o] : m.relations) out.push_back({Term::iri(s), Term::iri(p), Term::iri(o)});
  return ModelGraph(std::move(out), label);
}

Statement relation_statement(const Relation& r) {
  return {Term::iri(std::get<0>(r)), Term::iri(std::get<1>(r)), Term::iri(std::get<2>(r))};
}

BranchLedger branch_ledger(const ModelState& base, const ModelState& branch) {
  BranchLedger l;
  for (const auto& [e, st] : base.entities) {
    auto it = branch.entities.find(e);
    if (it == branch.entities.end()) {
      l.deleted.push_back(e);
      continue;
    }
    if (it->second.parent != st.parent) l.moved.push_back({e, st.parent, it->second.parent});
    std::set<std::string> preds;
    for (const auto& [p, v] : st.attributes) preds.insert(p);
    for (const auto& [p, v] : it->second.attributes) preds.insert(p);
    for (const auto& p : preds) {
      auto get = [&](const Attributes& a) {
        auto f = a.find(p);
        return f == a.end() ? Values{} : sorted_values(f->second);
      };
      Values before = get(st.attributes), after = get(it->second.attributes);
      if (before != after) l.attribute_edits.push_back({e, p, std::move(before), std::move(after)});
    }
  }
  for (const auto& [e, st] : branch.entities)
    if (!base.entities.contains(e)) l.added.push_back({e, st.parent});
  for (const auto& r : branch.relations)
    if (!base.relations.contains(r)) l.added_relations.push_back(relation_statement(r));
  for (const auto& r : base.relations)
    if (!branch.relations.contains(r)) l.deleted_relations.push_back(relation_statement(r));
  std::sort(l.added_relations.begin(), l.added_relations.end());
  std::sort(l.deleted_relations.begin(), l.deleted_relations.end());
  return l;
}

void check_rate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

void FixtureSpec::validate() const {
  if (entity_count == 0) throw ValidationError("entityCount must be positive");
  if (!(attrs_per_entity >= 1.0 && attrs_per_entity <= 64.0))
    throw ValidationError("attrsPerEntity must lie in [1,64]");
  for (const auto* b : {&left, &right}) {
    check_rate(b->attribute_edit_rate, "attributeEditRate");
    check_rate(b->delete_rate, "deleteRate");
    check_rate(b->add_rate, "addRate");
    check_rate(b->move_rate, "moveRate");
    check_rate(b->relation_add_rate, "relationAddRate");
    check_rate(b->relation_delete_rate, "relationDeleteRate");
  }
  check_rate(conflict_rate, "conflictRate");
  check_rate(convergent_rate, "convergentRate");
  if (conflict_rate + convergent_rate > 1.0) throw ValidationError("conflictRate + convergentRate must not exceed 1");
}

FixtureSpec FixtureSpec::full_scale() {
  FixtureSpec s;
  s.seed = 2006;
  s.entity_count = 2100;
  s.attrs_per_entity = 2.4;
  s.relation_count = 4100;
  s.left = {.attribute_edit_rate = 0.26,
            .delete_rate = 0.04,
            .add_rate = 0.2,
            .move_rate = 0.03,
            .relation_add_rate = 0.06,
            .relation_delete_rate = 0.04,
            .cascade_deletes = false};
  s.right = {.attribute_edit_rate = 0.08,
             .delete_rate = 0.06,
             .add_rate = 0.04,
             .move_rate = 0.0,
             .relation_add_rate = 0.02,
             .relation_delete_rate = 0.03,
             .cascade_deletes = true};
  s.conflict_rate = 0.35;
  s.convergent_rate = 0.1;
  s.right_deletes_left_deletions = true;
  return s;
}

Fixture generate_fixture(const FixtureSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t width = std::max<std::size_t>(4, digits(spec.entity_count));
  const ModelState base = generate_base(rng, spec, width);
  Derivation d{spec, base, rng, width};
  const ModelState left = derive(d, spec.left, 'L', {}, nullptr);
  std::set<std::string> forced;
  if (spec.right_deletes_left_deletions)
    for (const auto& [e, st] : base.entities)
      if (!left.entities.contains(e)) forced.insert(e);
  const ModelState right = derive(d, spec.right, 'R', forced, &left);

  for (const auto& [m, name] : {std::pair{&left, "left"}, std::pair{&right, "right"}})
    if (m->entities.empty()) throw ValidationError(std::string("fixture spec yields an empty ") + name + " model");

  Fixture f{to_graph(base, "base"), to_graph(left, "left"), to_graph(right, "right"), {}};
  auto& l = f.ledger;
  for (const auto& [e, st] : base.entities) l.base_entities.push_back({e, st.parent});
  for (const auto& r : base.relations) l.base_relations.push_back(relation_statement(r));
  std::sort(l.base_relations.begin(), l.base_relations.end());
  l.left = branch_ledger(base, left);
  l.right = branch_ledger(base, right);
  std::map<AttributeKey, const AttributeEdit*> right_edits;
  for (const auto& e : l.right.attribute_edits) right_edits[{e.entity, e.predicate}] = &e;
  for (const auto& e : l.left.attribute_edits) {
    auto it = right_edits.find({e.entity, e.predicate});
    if (it != right_edits.end() && it->second->after != e.after) l.conflicts.push_back({e.entity, e.predicate});
  }
  return f;
}

CatalogReport ledger_report(const ChangeLedger& ledger) {
  using Set = std::set<std::string>;
  Set base;
  for (const auto& e : ledger.base_entities) base.insert(e.entity);
  auto members = [&](const BranchLedger& b) {
    Set s = base;
    for (const auto& e : b.deleted) s.erase(e);
    for (const auto& e : b.added) s.insert(e.entity);
    return s;
  };
  const Set left = members(ledger.left);
  const Set right = members(ledger.right);
  Set added_left;
  for (const auto& e : ledger.left.added) added_left.insert(e.entity);

  std::vector<RowDetail> rows(catalog_row_count);
  auto entities = [&](int n) -> std::vector<std::string>& { return rows[static_cast<std::size_t>(n - 1)].entities; };
  auto attrs = [&](int n) -> std::vector<AttributeKey>& { return rows[static_cast<std::size_t>(n - 1)].attributes; };
  auto rels = [&](int n) -> std::vector<Statement>& { return rows[static_cast<std::size_t>(n - 1)].relations; };
  auto from_set = [](const Set& s) { return std::vector<std::string>(s.begin(), s.end()); };

  entities(1) = from_set(left);
  entities(2) = from_set(right);
  for (const auto& e : left)
    if (right.contains(e)) entities(3).push_back(e);

  Set changed, conflicted, unconflicted;
  for (const auto& k : ledger.conflicts) conflicted.insert(k.entity);
  for (const auto& e : ledger.left.attribute_edits) {
    changed.insert(e.entity);
    attrs(4).push_back({e.entity, e.predicate});
    if (right.contains(e.entity) && !conflicted.contains(e.entity)) {
      unconflicted.insert(e.entity);
      attrs(5).push_back({e.entity, e.predicate});
    }
  }
  entities(4) = from_set(changed);
  entities(5) = from_set(unconflicted);
  entities(6) = from_set(conflicted);
  attrs(6) = ledger.conflicts;

  for (const auto& e : ledger.left.added) {
    entities(7).push_back(e.entity);
    if (e.parent && base.contains(*e.parent)) {
      entities(8).push_back(e.entity);
      if (right.contains(*e.parent)) entities(9).push_back(e.entity);
    }
  }
  for (const auto& e : ledger.left.deleted)
    if (right.contains(e)) entities(10).push_back(e);

  std::set<Statement> left_relations(ledger.base_relations.begin(), ledger.base_relations.end());
  for (const auto& r : ledger.left.deleted_relations) left_relations.erase(r);
  left_relations.insert(ledger.left.added_relations.begin(), ledger.left.added_relations.end());
  Set src11, src12, src13, src14;
  for (const auto& r : left_relations) {
    const auto& s = r.subject.value();
    const auto& o = r.object.value();
    if (added_left.contains(s) && base.contains(o)) {
      src11.insert(s);
      rels(11).push_back(r);
      if (right.contains(o)) {
        src12.insert(s);
        rels(12).push_back(r);
      }
    }
    if (base.contains(s) && added_left.contains(o)) {
      src13.insert(s);
      rels(13).push_back(r);
      if (right.contains(s)) {
        src14.insert(s);
        rels(14).push_back(r);
      }
    }
  }
  entities(11) = from_set(src11);
  entities(12) = from_set(src12);
  entities(13) = from_set(src13);
  entities(14) = from_set(src14);

  auto between = [](const Set& s, const Statement& r) {
    return s.contains(r.subject.value()) && s.contains(r.object.value());
  };
  for (const auto& r : ledger.left.added_relations) {
    if (!between(base, r)) continue;
    rels(15).push_back(r);
    if (between(right, r)) rels(16).push_back(r);
  }
  for (const auto& r : ledger.left.deleted_relations) {
    if (!between(base, r)) continue;
    rels(17).push_back(r);
    if (between(right, r)) rels(18).push_back(r);
  }

  std::map<std::string, std::optional<std::string>> moved_right;
  for (const auto& m : ledger.right.moved) moved_right[m.entity] = m.to;
  for (const auto& m : ledger.left.moved) {
    entities(19).push_back(m.entity);
    auto it = moved_right.find(m.entity);
    if (right.contains(m.entity) && it == moved_right.end()) entities(20).push_back(m.entity);
    if (it != moved_right.end() && it->second != m.to) entities(21).push_back(m.entity);
  }

  CatalogReport report;
  report.roles = {"base", "left", "right"};
  // Same notes the catalog gives for new entities without a parent.
  for (const auto& e : ledger.left.added)
    if (!e.parent) report.diagnostics.push_back("new entity <" + e.entity + "> has no containment parent in 'left'");
  std::sort(report.diagnostics.begin(), report.diagnostics.end());
  for (int n = 1; n <= catalog_row_count; ++n) {
    CatalogRow row;
    row.number = n;
    row.description = std::string(catalog_description(n));
    auto& d = rows[static_cast<std::size_t>(n - 1)];
    std::sort(d.entities.begin(), d.entities.end());
    std::sort(d.attributes.begin(), d.attributes.end());
    std::sort(d.relations.begin(), d.relations.end());
    for (auto c : catalog_columns(n)) {
      switch (c) {
        case CatalogColumn::entities: row.entities = d.entities.size(); break;
        case CatalogColumn::attributes: row.attributes = d.attributes.size(); break;
        case CatalogColumn::relations: row.relations = d.relations.size(); break;
      }
    }
    if (!row.entities) d.entities.clear();
    if (!row.attributes) d.attributes.clear();
    if (!row.relations) d.relations.clear();
    row.detail = std::move(d);
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---- JSON ----

namespace {

ordered_json rates_json(const BranchRates& b) {
  return {{"attributeEditRate", b.attribute_edit_rate}, {"deleteRate", b.delete_rate},
          {"addRate", b.add_rate},                      {"moveRate", b.move_rate},
          {"relationAddRate", b.relation_add_rate},     {"relationDeleteRate", b.relation_delete_rate},
          {"cascadeDeletes", b.cascade_deletes}};
}

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ValidationError("unknown key '" + k + "' in " + where);
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ValidationError(std::string(key) + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_unsigned()) throw ValidationError(std::string(key) + " must be a non-negative integer");
    } else {
      if (!it->is_number()) throw ValidationError(std::string(key) + " must be a number");
    }
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(key) + ": " + e.what());
  }
}

BranchRates parse_rates(const nlohmann::json& j, const std::string& where) {
  check_keys(j,
             {"attributeEditRate", "deleteRate", "addRate", "moveRate", "relationAddRate", "relationDeleteRate",
              "cascadeDeletes"},
             where);
  BranchRates b;
  read(j, "attributeEditRate", b.attribute_edit_rate);
  read(j, "deleteRate", b.delete_rate);
  read(j, "addRate", b.add_rate);
  read(j, "moveRate", b.move_rate);
  read(j, "relationAddRate", b.relation_add_rate);
  read(j, "relationDeleteRate", b.relation_delete_rate);
  read(j, "cascadeDeletes", b.cascade_deletes);
  return b;
}

ordered_json optional_json(const std::optional<std::string>& s) { return s ? ordered_json(*s) : ordered_json(nullptr); }

ordered_json statements_json(const std::vector<Statement>& v) {
  auto a = ordered_json::array();
  for (const auto& s : v) a.push_back({s.subject.value(), s.predicate.value(), s.object.value()});
  return a;
}

ordered_json branch_json(const BranchLedger& b) {
  ordered_json j;
  j["deleted"] = b.deleted;
  auto added = ordered_json::array();
  for (const auto& e : b.added) added.push_back({{"entity", e.entity}, {"parent", optional_json(e.parent)}});
  j["added"] = std::move(added);
  auto moved = ordered_json::array();
  for (const auto& m : b.moved)
    moved.push_back({{"entity", m.entity}, {"from", optional_json(m.from)}, {"to", optional_json(m.to)}});
  j["moved"] = std::move(moved);
  auto edits = ordered_json::array();
  for (const auto& e : b.attribute_edits)
    edits.push_back({{"entity", e.entity}, {"predicate", e.predicate}, {"before", e.before}, {"after", e.after}});
  j["attributeEdits"] = std::move(edits);
  j["addedRelations"] = statements_json(b.added_relations);
  j["deletedRelations"] = statements_json(b.deleted_relations);
  return j;
}

}  // namespace

FixtureSpec parse_fixture_spec(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  check_keys(j,
             {"seed", "entityCount", "attrsPerEntity", "relationCount", "left", "right", "conflictRate",
              "convergentRate", "rightDeletesLeftDeletions"},
             "fixture spec");
  FixtureSpec s;
  read(j, "seed", s.seed);
  read(j, "entityCount", s.entity_count);
  read(j, "attrsPerEntity", s.attrs_per_entity);
  read(j, "relationCount", s.relation_count);
  if (j.contains("left")) s.left = parse_rates(j["left"], "left");
  if (j.contains("right")) s.right = parse_rates(j["right"], "right");
  read(j, "conflictRate", s.conflict_rate);
  read(j, "convergentRate", s.convergent_rate);
  read(j, "rightDeletesLeftDeletions", s.right_deletes_left_deletions);
  s.validate();
  return s;
}

std::string fixture_spec_json(const FixtureSpec& s) {
  ordered_json j;
  j["seed"] = s.seed;
  j["entityCount"] = s.entity_count;
  j["attrsPerEntity"] = s.attrs_per_entity;
  j["relationCount"] = s.relation_count;
  j["left"] = rates_json(s.left);
  j["right"] = rates_json(s.right);
  j["conflictRate"] = s.conflict_rate;
  j["convergentRate"] = s.convergent_rate;
  j["rightDeletesLeftDeletions"] = s.right_deletes_left_deletions;
  return j.dump(2) + "\n";
}

std::string ledger_json(const ChangeLedger& ledger) {
  ordered_json j;
  auto base = ordered_json::array();
  for (const auto& e : ledger.base_entities) base.push_back({{"entity", e.entity}, {"parent", optional_json(e.parent)}});
  j["baseEntities"] = std::move(base);
  j["baseRelations"] = statements_json(ledger.base_relations);
  j["left"] = branch_json(ledger.left);
  j["right"] = branch_json(ledger.right);
  auto conflicts = ordered_json::array();
  for (const auto& k : ledger.conflicts) conflicts.push_back({k.entity, k.predicate});
  j["conflicts"] = std::move(conflicts);
  auto rows = ordered_json::array();
  for (const auto& r : ledger_report(ledger).rows) {
    auto cell = [](const std::optional<std::size_t>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    rows.push_back({{"row", r.number},
                    {"entities", cell(r.entities)},
                    {"attributes", cell(r.attributes)},
                    {"relations", cell(r.relations)}});
  }
  j["expectedReport"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace modeldelta
