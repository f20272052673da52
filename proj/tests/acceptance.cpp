// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "golden.hpp"
#include "modeldelta/catalog.hpp"
#include "modeldelta/compare.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/fixtures.hpp"
#include "modeldelta/io.hpp"
#include "modeldelta/query.hpp"
#include "modeldelta/textdiff.hpp"
#include "oracles.hpp"

using namespace modeldelta;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

const RoleBinding roles{"base", "left", "right"};

const fs::path scratch = fs::temp_directory_path() / "modeldelta_acceptance";

int cli_run(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

FixtureSpec random_spec(oracle::Rng& rng) {
  auto rate = [&](double hi) { return std::uniform_real_distribution<double>(0.0, hi)(rng); };
  auto branch = [&] {
    return BranchRates{rate(0.4), rate(0.25), rate(0.3), rate(0.15), rate(0.2), rate(0.2), oracle::coin(rng)};
  };
  FixtureSpec s;
  s.seed = rng();
  s.entity_count = 50 + oracle::pick(rng, 451);
  s.attrs_per_entity = 1.0 + rate(3.0);
  s.relation_count = oracle::pick(rng, 2 * s.entity_count + 1);
  s.left = branch();
  s.right = branch();
  s.conflict_rate = rate(0.6);
  s.convergent_rate = rate(1.0 - s.conflict_rate);
  s.right_deletes_left_deletions = oracle::coin(rng);
  return s;
}

// ---- criterion 5 helpers ----

std::string identity_violation(const ComparisonModel& c) {
  const auto r = run_catalog(c, roles);
  auto e = [&](int n) { return *r.rows[n - 1].entities; };
  auto rel = [&](int n) { return *r.rows[n - 1].relations; };
  auto items = [&](int n) { return std::set<std::string>(r.rows[n - 1].detail.entities.begin(), r.rows[n - 1].detail.entities.end()); };
  auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  const auto common = items(3);
  std::size_t common_changed = 0;
  for (const auto& ce : changed_entities(c, "base", "left")) common_changed += common.contains(ce.entity);
  if (e(5) + e(6) != common_changed) return "row5 + row6 != common changed entities";
  if (!subset(items(9), items(8)) || !subset(items(8), items(7))) return "row 9 <= 8 <= 7 broken";
  if (e(12) > e(11) || rel(12) > rel(11) || e(14) > e(13) || rel(14) > rel(13)) return "rows 11-14 chain broken";
  if (rel(16) > rel(15) || rel(18) > rel(17)) return "rows 15-18 chain broken";
  if (!subset(items(20), items(19)) || !subset(items(21), items(19))) return "rows 19-21 chain broken";
  return "";
}

std::string self_comparison_violation(const ModelGraph& m) {
  const std::vector<LabeledGraph> g{{"base", m}, {"left", m}, {"right", m}};
  const auto r = run_catalog(build_comparison(g), roles);
  for (int n = 4; n <= 21; ++n)
    for (auto col : catalog_columns(n))
      if (r.rows[n - 1].cell(col) != std::optional<std::size_t>(0))
        return "self-comparison row " + std::to_string(n) + " not zero";
  return "";
}

std::vector<Fixture> criterion5_fixtures;

// ---- criteria ----

Verdict criterion1() {
  Verdict v;
  oracle::Rng rng(1001);
  const auto start = Clock::now();
  constexpr int rounds = 100;
  int rejected = 0;
  for (int i = 0; i < rounds && v.pass; ++i) {
    const FixtureSpec spec = random_spec(rng);
    Fixture f;
    try {
      f = generate_fixture(spec);
    } catch (const ValidationError&) {
      // Deletes emptied a model; the generator rejects such specs by contract.
      ++rejected, --i;
      continue;
    }
    const fs::path dir = scratch / "c1";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file((dir / "spec.json").string(), fixture_spec_json(spec));
    const std::string d = dir.string();
    std::string report;
    if (cli_run({"fixture", "--spec", d + "/spec.json", "-o", d}) != 0 ||
        cli_run({"compare", "-l", "base=" + d + "/base.nt3", "-l", "left=" + d + "/left.nt3", "-l",
                 "right=" + d + "/right.nt3", "-o", d + "/c.ntc"}) != 0 ||
        cli_run({"analyze", d + "/c.ntc", "--base", "base", "--left", "left", "--right", "right", "--format", "json"},
                &report) != 0) {
      v.fail("pipeline failed for seed " + std::to_string(spec.seed));
      break;
    }
    if (report != render_catalog(ledger_report(f.ledger), OutputFormat::json))
      v.fail("report differs from ledger for seed " + std::to_string(spec.seed));
    criterion5_fixtures.push_back(std::move(f));
  }
  const double t = seconds_since(start);
  if (t >= 300) v.fail("took " + std::to_string(t) + " s");
  if (v.pass) {
    std::ostringstream s;
    s.precision(1);
    s << std::fixed << rounds << " random fixtures through fixture/compare/analyze equal their ledgers, " << t << " s ("
      << rejected << " specs rejected for emptying a model)";
    v.detail = s.str();
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  oracle::Rng rng(2002);
  const std::vector<std::string> labels{"base", "left", "right"};
  std::size_t rows = 0, largest = 0;
  constexpr int rounds = 1000;
  for (int i = 0; i < rounds; ++i) {
    const auto c = oracle::random_comparison(rng, labels);
    largest = std::max(largest, c.size());
    if (c.size() > 200) {
      v.fail("model exceeds 200 statements");
      break;
    }
    const auto q = oracle::random_query(rng, labels);
    const auto got = evaluate(c, q);
    rows += got.rows.size();
    if (!(got == oracle::brute_force_evaluate(c, q))) {
      v.fail("mismatch on query: " + to_text(q));
      break;
    }
  }
  if (v.pass)
    v.detail = std::to_string(rounds) + " random query/model pairs equal brute force (" + std::to_string(rows) +
               " rows, models up to " + std::to_string(largest) + " statements)";
  return v;
}

Verdict criterion3() {
  Verdict v;
  oracle::Rng rng(3003);
  constexpr int rounds = 1000;
  auto join = [](const std::vector<DiffHunk>& hunks, DiffOp skip) {
    std::vector<std::string> out;
    for (const auto& h : hunks)
      if (h.op != skip) out.insert(out.end(), h.tokens.begin(), h.tokens.end());
    return out;
  };
  for (int i = 0; i < rounds && v.pass; ++i) {
    const std::size_t alphabet = 2 + oracle::pick(rng, 30);
    const auto a = oracle::random_tokens(rng, 300, alphabet);
    const auto b = oracle::random_tokens(rng, 300, alphabet);
    const auto m = lcs_matches(a, b);
    const std::size_t expected = oracle::dp_lcs_length(a, b);
    if (m.size() != expected) {
      v.fail("LCS length " + std::to_string(m.size()) + " != DP " + std::to_string(expected));
      break;
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (a[m[k].a] != b[m[k].b] || (k > 0 && (m[k].a <= m[k - 1].a || m[k].b <= m[k - 1].b))) {
        v.fail("matches are not a common subsequence");
        break;
      }
    }
    if (lcs(b, a).size() != expected) v.fail("LCS length not symmetric");
    const auto hunks = diff_tokens(a, b);
    if (join(hunks, DiffOp::insert) != a) v.fail("delete+equal hunks do not rebuild a");
    if (join(hunks, DiffOp::remove) != b) v.fail("insert+equal hunks do not rebuild b");
    std::size_t equal = 0;
    for (std::size_t k = 0; k < hunks.size(); ++k) {
      if (hunks[k].tokens.empty()) v.fail("empty hunk");
      if (k > 0 && hunks[k].op == hunks[k - 1].op) v.fail("adjacent hunks share an op");
      if (hunks[k].op == DiffOp::equal) equal += hunks[k].tokens.size();
    }
    if (equal != expected) v.fail("equal hunks do not cover the LCS");
  }
  if (v.pass) v.detail = std::to_string(rounds) + " random token pairs match the DP length; hunks rebuild both sides";
  return v;
}

Verdict criterion4() {
  Verdict v;
  const Fixture f = generate_fixture(FixtureSpec::full_scale());
  const std::vector<LabeledGraph> g{{"base", f.base}, {"left", f.left}, {"right", f.right}};
  const auto c = build_comparison(g);
  if (c.size() < 15000) v.fail("comparison has only " + std::to_string(c.size()) + " entries");
  double slowest = 0;
  int slowest_row = 0;
  for (int n = 1; n <= catalog_row_count; ++n) {
    const auto start = Clock::now();
    run_catalog_row(c, roles, n);
    const double t = seconds_since(start);
    if (t > slowest) slowest = t, slowest_row = n;
  }
  if (slowest >= 5) v.fail("row " + std::to_string(slowest_row) + " took " + std::to_string(slowest) + " s");

  const std::string dir = (scratch / "c4").string();
  fs::create_directories(dir);
  write_file(dir + "/c.ntc", serialize_comparison(c));
  std::string out;
  const auto start = Clock::now();
  const int code = cli_run({"analyze", dir + "/c.ntc", "--base", "base", "--left", "left", "--right", "right"}, &out);
  const double full = seconds_since(start);
  if (code != 0) v.fail("analyze failed");
  if (full >= 60) v.fail("analyze took " + std::to_string(full) + " s");
  criterion5_fixtures.push_back(f);
  if (v.pass) {
    std::ostringstream s;
    s.precision(3);
    s << std::fixed << c.size() << " entries; slowest analysis " << slowest << " s (row " << slowest_row
      << "); full analyze " << full << " s";
    v.detail = s.str();
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  if (criterion5_fixtures.empty()) v.fail("no fixtures were generated");
  for (const auto& f : criterion5_fixtures) {
    const std::vector<LabeledGraph> g{{"base", f.base}, {"left", f.left}, {"right", f.right}};
    if (auto why = identity_violation(build_comparison(g)); !why.empty()) v.fail(why);
    for (const auto* m : {&f.base, &f.left, &f.right})
      if (auto why = self_comparison_violation(*m); !why.empty()) v.fail(why);
    if (!v.pass) break;
  }
  if (v.pass)
    v.detail = "identity, subset chains and zero self-comparison hold on " + std::to_string(criterion5_fixtures.size()) +
               " fixtures";
  return v;
}

Verdict criterion6() {
  Verdict v;
  oracle::Rng rng(6006);
  constexpr int rounds = 1000;
  for (int i = 0; i < rounds && v.pass; ++i) {
    const auto g = oracle::random_graph(rng, 40);
    if (!(parse_graph(serialize_graph(g)) == g)) v.fail(".nt3 round trip changed a graph");
  }
  for (int i = 0; i < 300 && v.pass; ++i) {
    const std::vector<std::string> names{"A", "B", "C", "D"};
    std::vector<LabeledGraph> in;
    const std::size_t k = 2 + oracle::pick(rng, 3);
    for (std::size_t j = 0; j < k; ++j) in.push_back({names[j], oracle::random_graph(rng, 30)});
    const auto c = build_comparison(in);
    for (const auto& x : in)
      if (!(project_origin(c, x.label) == x.graph)) v.fail("projection does not reconstruct " + x.label);
    std::vector<ModelGraph> graphs;
    for (const auto& x : in) graphs.push_back(x.graph);
    if (c.size() != oracle::union_size(graphs)) v.fail("entry count differs from the union size");
    std::size_t expected = 0;
    for (const auto& e : c.entries()) expected += 3 + e.origins.size();
    const auto reified = export_reified(c);
    if (reified.size() != expected) v.fail("reified statement count differs from 3 + |origins| per entry");
    std::vector<std::string> labels;
    for (const auto& x : in) labels.push_back(x.label);
    if (!(oracle::read_reified(parse_graph(serialize_graph(reified)), labels) == c))
      v.fail("reified export does not read back");
  }
  if (v.pass) v.detail = std::to_string(rounds) + " .nt3 round trips; 300 projection and reification rounds";
  return v;
}

Verdict criterion7() {
  Verdict v;
  const Term a1 = Term::iri("e:a1"), name = Term::iri("a:Name");
  const Term old_name = Term::literal("Design"), new_name = Term::literal("System Design");
  const std::vector<LabeledGraph> in{{"base", ModelGraph({{a1, name, old_name}})},
                                     {"left", ModelGraph({{a1, name, new_name}})}};
  const auto c = build_comparison(in);
  if (c.size() != 2) v.fail("expected a two-statement comparison");
  const std::string dir = MODELDELTA_SOURCE_DIR "/queries/examples/";
  const auto removed = evaluate(c, parse_query(read_file(dir + "removed_statements.dq")));
  const auto added = evaluate(c, parse_query(read_file(dir + "added_statements.dq")));
  if (removed.rows != std::vector<std::vector<Term>>{{a1, name, old_name}})
    v.fail("removed_statements.dq does not yield the old name only");
  if (added.rows != std::vector<std::vector<Term>>{{a1, name, new_name}})
    v.fail("added_statements.dq does not yield the new name only");
  const auto change = evaluate(c, parse_query(read_file(dir + "attribute_value_changes.dq")));
  if (change.rows != std::vector<std::vector<Term>>{{a1, name, old_name, new_name}})
    v.fail("attribute_value_changes.dq does not pair the two values");
  const std::string diff = render_word_diff(diff_text("Design", "System Design", TokenMode::word));
  if (diff != "{+System+} Design") v.fail("word diff rendered '" + diff + "'");
  if (v.pass) v.detail = "shipped queries mark \"Design\" as base-only and \"System Design\" as left-only; " + diff;
  return v;
}

Verdict criterion8() {
  Verdict v;
  const auto outcome = golden::run_suite(MODELDELTA_SOURCE_DIR, scratch / "golden", false);
  if (!outcome.failures.empty()) v.fail(outcome.failures.front());
  if (outcome.cases == 0) v.fail("no golden cases");
  if (v.pass) v.detail = std::to_string(outcome.cases) + " golden CLI cases, each run twice, byte-identical";
  return v;
}

}  // namespace

int main() {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << "Criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail << std::endl;
  }
  fs::remove_all(scratch);
  return failed == 0 ? 0 : 1;
}
