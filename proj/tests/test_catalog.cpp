#include <algorithm>

#include "doctest.h"
#include "modeldelta/catalog.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/fixtures.hpp"
#include "oracles.hpp"

using namespace modeldelta;

namespace {

const RoleBinding roles{"base", "left", "right"};

Statement type(const std::string& e) { return {Term::iri("e:" + e), Term::iri("m:type"), Term::literal("A")}; }
Statement name(const std::string& e, const std::string& v) {
  return {Term::iri("e:" + e), Term::iri("a:Name"), Term::literal(v)};
}
Statement in(const std::string& e, const std::string& parent) {
  return {Term::iri("e:" + e), Term::iri("m:containedIn"), Term::iri("e:" + parent)};
}
Statement uses(const std::string& a, const std::string& b) {
  return {Term::iri("e:" + a), Term::iri("r:uses"), Term::iri("e:" + b)};
}

ComparisonModel three(std::vector<Statement> base, std::vector<Statement> left, std::vector<Statement> right) {
  const std::vector<LabeledGraph> g{{"base", ModelGraph(std::move(base))},
                                    {"left", ModelGraph(std::move(left))},
                                    {"right", ModelGraph(std::move(right))}};
  return build_comparison(g);
}

std::size_t count(const CatalogReport& r, int row, CatalogColumn col) { return r.rows.at(row - 1).cell(col).value(); }

void check_counts(const CatalogReport& r, const oracle::CatalogCounts& expected) {
  REQUIRE(r.rows.size() == 21);
  for (int n = 1; n <= 21; ++n) {
    INFO("row " << n);
    CHECK(r.rows[n - 1].entities == expected[n - 1][0]);
    CHECK(r.rows[n - 1].attributes == expected[n - 1][1]);
    CHECK(r.rows[n - 1].relations == expected[n - 1][2]);
  }
}

std::vector<std::string> iris(std::initializer_list<const char*> ids) {
  std::vector<std::string> out;
  for (const char* id : ids) out.push_back(std::string("e:") + id);
  return out;
}

}  // namespace

TEST_CASE("roles are validated") {
  const auto c = three({type("a")}, {type("a")}, {type("a")});
  CHECK_THROWS_AS(run_catalog(c, {"base", "left", "nope"}), UsageError);
  CHECK_THROWS_AS(run_catalog(c, {"base", "left", "left"}), UsageError);
  CHECK_THROWS_AS(run_catalog_row(c, roles, 0), UsageError);
  CHECK_THROWS_AS(run_catalog_row(c, roles, 22), UsageError);
}

TEST_CASE("empty-cell pattern") {
  const auto r = run_catalog(three({type("a")}, {type("a")}, {type("a")}), roles);
  std::string pattern;
  for (const auto& row : r.rows)
    pattern += std::string(row.entities ? "E" : "-") + (row.attributes ? "A" : "-") + (row.relations ? "R" : "-") + " ";
  CHECK(pattern ==
        "E-- E-- E-- EA- EA- EA- E-- E-- E-- E-- E-R E-R E-R E-R --R --R --R --R E-- E-- E-- ");
}

TEST_CASE("common entities") {
  const auto c = three({}, {type("a1"), type("a2")}, {type("a2"), type("a3")});
  CHECK(common_entities(c, roles) == iris({"a2"}));
  CHECK(common_entities(three({type("x")}, {type("a")}, {type("b")}), roles).empty());
}

TEST_CASE("changed entities and conflicts") {
  const auto c = three({type("a1"), name("a1", "Design")}, {type("a1"), name("a1", "System Design")},
                       {type("a1"), name("a1", "Design")});
  const auto changed = changed_entities(c, "base", "left");
  REQUIRE(changed.size() == 1);
  CHECK(changed[0] == ChangedEntity{"e:a1", {"a:Name"}});
  CHECK(changed_entities(c, "base", "right").empty());

  const auto same = three({type("e1"), name("e1", "a")}, {type("e1"), name("e1", "b")}, {type("e1"), name("e1", "b")});
  CHECK(conflicting_attributes(same, roles).empty());
  const auto r = run_catalog(same, roles);
  CHECK(count(r, 5, CatalogColumn::entities) == 1);
  CHECK(count(r, 6, CatalogColumn::entities) == 0);

  const auto diff = three({type("e1"), name("e1", "a")}, {type("e1"), name("e1", "X")}, {type("e1"), name("e1", "Y")});
  CHECK(conflicting_attributes(diff, roles) == std::vector<AttributeKey>{{"e:e1", "a:Name"}});
  const auto rd = run_catalog(diff, roles);
  CHECK(count(rd, 5, CatalogColumn::entities) == 0);
  CHECK(count(rd, 6, CatalogColumn::attributes) == 1);
}

TEST_CASE("a conflict on one attribute moves the whole entity out of row 5") {
  const Statement desc0{Term::iri("e:e1"), Term::iri("a:Desc"), Term::literal("0")};
  const Statement desc1{Term::iri("e:e1"), Term::iri("a:Desc"), Term::literal("1")};
  const auto c = three({type("e1"), name("e1", "a"), desc0}, {type("e1"), name("e1", "X"), desc1},
                       {type("e1"), name("e1", "Y"), desc0});
  const auto r = run_catalog(c, roles);
  CHECK(count(r, 4, CatalogColumn::entities) == 1);
  CHECK(count(r, 4, CatalogColumn::attributes) == 2);
  CHECK(count(r, 5, CatalogColumn::entities) == 0);
  CHECK(count(r, 6, CatalogColumn::entities) == 1);
  CHECK(count(r, 6, CatalogColumn::attributes) == 1);
}

TEST_CASE("new entities") {
  const auto c = three({type("p")}, {type("p"), type("n1"), in("n1", "p"), type("n2"), in("n2", "n1"), type("n3")},
                       {type("p")});
  const auto ne = new_entities(c, "left", "base", "right");
  CHECK(ne.all == iris({"n1", "n2", "n3"}));
  CHECK(ne.in_preexisting == iris({"n1"}));
  CHECK(ne.in_surviving == iris({"n1"}));
  REQUIRE(ne.diagnostics.size() == 1);
  CHECK(ne.diagnostics[0].find("e:n3") != std::string::npos);
  CHECK(run_catalog(c, roles).diagnostics == ne.diagnostics);
}

TEST_CASE("deleted entities still present") {
  const auto c = three({type("a"), type("b")}, {type("b")}, {type("a"), type("b")});
  CHECK(deleted_still_present(c, roles) == iris({"a"}));
  CHECK(deleted_still_present(three({type("a")}, {}, {}), roles).empty());
}

TEST_CASE("reference analyses") {
  const auto c = three({type("s"), type("t"), type("gone")},
                       {type("s"), type("t"), type("gone"), type("n"), uses("n", "s"), uses("n", "t"), uses("n", "gone"),
                        uses("t", "n")},
                       {type("s"), type("t")});
  const auto ra = reference_analyses(c, roles);
  CHECK(ra.new_to_preexisting.entities == iris({"n"}));
  CHECK(ra.new_to_preexisting.relations.size() == 3);
  CHECK(ra.new_to_surviving.entities == iris({"n"}));
  CHECK(ra.new_to_surviving.relations.size() == 2);
  CHECK(ra.preexisting_to_new.relations == std::vector<Statement>{uses("t", "n")});
  CHECK(ra.surviving_to_new.entities == iris({"t"}));
  const auto none = reference_analyses(three({type("a")}, {type("a"), type("n")}, {type("a")}), roles);
  CHECK(none.new_to_preexisting.relations.empty());
  CHECK(none.surviving_to_new.entities.empty());
}

TEST_CASE("relation deltas") {
  const auto c = three({type("a"), type("b"), type("c"), uses("a", "c")}, {type("a"), type("b"), type("c"), uses("a", "b")},
                       {type("a"), type("b")});
  const auto rd = relation_deltas(c, roles);
  CHECK(rd.added_between_preexisting == std::vector<Statement>{uses("a", "b")});
  CHECK(rd.added_between_surviving == std::vector<Statement>{uses("a", "b")});
  CHECK(rd.deleted_between_preexisting == std::vector<Statement>{uses("a", "c")});
  CHECK(rd.deleted_between_surviving.empty());
}

TEST_CASE("moved entities") {
  const std::vector<Statement> tree{type("r"), type("p"), type("q"), type("x"), in("x", "p"),
                                    type("y"), in("y", "p"), type("z"), in("z", "p"), type("w")};
  auto with = [&](std::vector<Statement> extra) {
    auto m = tree;
    m.insert(m.end(), extra.begin(), extra.end());
    return m;
  };
  // x: left only. y: both to the same parent. z: both, different parents. w: gains a parent in left.
  const auto c = three(tree, with({in("w", "r")}), tree);
  const auto& base = tree;
  std::vector<Statement> left{type("r"), type("p"), type("q"), type("x"), in("x", "q"), type("y"),
                              in("y", "q"), type("z"), in("z", "q"), type("w"), in("w", "r")};
  std::vector<Statement> right{type("r"), type("p"), type("q"), type("x"), in("x", "p"), type("y"),
                               in("y", "q"), type("z"), in("z", "r"), type("w")};
  const auto mv = moved_entities(three(base, left, right), roles);
  CHECK(mv.moved == iris({"w", "x", "y", "z"}));
  CHECK(mv.moved_only_by_left == iris({"w", "x"}));
  CHECK(mv.conflicting == iris({"z"}));
  CHECK(moved_entities(c, roles).moved == iris({"w"}));

  const auto broken = three({type("a"), in("a", "p"), in("a", "q"), type("p"), type("q")}, {type("a")}, {type("a")});
  CHECK_THROWS_AS(moved_entities(broken, roles), IntegrityError);
}

TEST_CASE("self comparison and empty comparison give zero change rows") {
  oracle::Rng rng(3);
  for (int round = 0; round < 20; ++round) {
    const auto m = oracle::random_three_way(rng)[0].graph;
    const std::vector<LabeledGraph> g{{"base", m}, {"left", m}, {"right", m}};
    const auto r = run_catalog(build_comparison(g), roles);
    for (int n = 4; n <= 21; ++n)
      for (auto col : catalog_columns(n)) CHECK(r.rows[n - 1].cell(col) == std::optional<std::size_t>(0));
  }
  const std::vector<LabeledGraph> empty{{"base", {}}, {"left", {}}, {"right", {}}};
  const auto r = run_catalog(build_comparison(empty), roles);
  for (const auto& row : r.rows)
    for (auto col : catalog_columns(row.number)) CHECK(row.cell(col) == std::optional<std::size_t>(0));
}

TEST_CASE("row detail lists match counts") {
  oracle::Rng rng(4);
  for (int round = 0; round < 30; ++round) {
    const auto c = build_comparison(oracle::random_three_way(rng));
    const auto full = run_catalog(c, roles);
    for (int n = 1; n <= 21; ++n) {
      const auto row = run_catalog_row(c, roles, n);
      CHECK(row.entities == full.rows[n - 1].entities);
      CHECK(row.attributes == full.rows[n - 1].attributes);
      CHECK(row.relations == full.rows[n - 1].relations);
      if (row.entities) CHECK(row.detail.entities.size() == *row.entities);
      if (row.attributes) CHECK(row.detail.attributes.size() == *row.attributes);
      if (row.relations) CHECK(row.detail.relations.size() == *row.relations);
    }
  }
}

TEST_CASE("native operations, shipped queries and a brute-force scan agree") {
  CHECK(catalog_queries().size() == 28);
  oracle::Rng rng(5);
  for (int round = 0; round < 300; ++round) {
    const auto c = build_comparison(oracle::random_three_way(rng));
    const auto expected = oracle::brute_force_catalog(c, "base", "left", "right");
    check_counts(run_catalog(c, roles), expected);
    check_counts(run_catalog_queries(c, roles), expected);
  }
}

TEST_CASE("queries follow the role binding") {
  oracle::Rng rng(6);
  auto g = oracle::random_three_way(rng);
  g[0].label = "v11";
  g[1].label = "v12";
  g[2].label = "tailored";
  const auto c = build_comparison(g);
  const RoleBinding renamed{"v11", "v12", "tailored"};
  const auto expected = oracle::brute_force_catalog(c, "v11", "v12", "tailored");
  check_counts(run_catalog(c, renamed), expected);
  check_counts(run_catalog_queries(c, renamed), expected);
}

TEST_CASE("fixtures match the ledger and the subset chains") {
  oracle::Rng rng(7);
  for (int round = 0; round < 10; ++round) {
    FixtureSpec spec;
    spec.seed = rng();
    spec.entity_count = 50 + oracle::pick(rng, 150);
    spec.relation_count = spec.entity_count;
    spec.left = {0.3, 0.05, 0.2, 0.05, 0.1, 0.05, oracle::coin(rng)};
    spec.right = {0.1, 0.05, 0.05, 0.05, 0.05, 0.05, oracle::coin(rng)};
    spec.conflict_rate = 0.3;
    spec.convergent_rate = 0.2;
    const auto f = generate_fixture(spec);
    const std::vector<LabeledGraph> g{{"base", f.base}, {"left", f.left}, {"right", f.right}};
    const auto c = build_comparison(g);
    const auto r = run_catalog(c, roles);
    const auto expected = ledger_report(f.ledger);
    for (int n = 1; n <= 21; ++n) {
      INFO("row " << n);
      CHECK(r.rows[n - 1].entities == expected.rows[n - 1].entities);
      CHECK(r.rows[n - 1].attributes == expected.rows[n - 1].attributes);
      CHECK(r.rows[n - 1].relations == expected.rows[n - 1].relations);
    }
    auto e = [&](int n) { return *r.rows[n - 1].entities; };
    auto rel = [&](int n) { return *r.rows[n - 1].relations; };
    std::size_t common_changed = 0;
    const auto common = common_entities(c, roles);
    for (const auto& ce : changed_entities(c, "base", "left"))
      common_changed += std::binary_search(common.begin(), common.end(), ce.entity);
    CHECK(e(5) + e(6) == common_changed);
    CHECK(e(9) <= e(8));
    CHECK(e(8) <= e(7));
    CHECK(e(12) <= e(11));
    CHECK(rel(12) <= rel(11));
    CHECK(e(14) <= e(13));
    CHECK(rel(16) <= rel(15));
    CHECK(rel(18) <= rel(17));
    CHECK(e(20) <= e(19));
    CHECK(e(21) <= e(19));
  }
}
