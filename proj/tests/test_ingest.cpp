#include <set>

#include "doctest.h"
#include "modeldelta/error.hpp"
#include "modeldelta/ingest.hpp"
#include "oracles.hpp"

using namespace modeldelta;

namespace {

Statement st(const std::string& s, const std::string& p, Term o) { return {Term::iri(s), Term::iri(p), std::move(o)}; }

/// Random XML under the convention, with the statements it must produce.
struct RandomModel {
  std::string xml;
  std::set<Statement> expected;
};

struct XmlGen {
  oracle::Rng& rng;
  int next_id = 0;
  std::vector<std::string> ids;
  RandomModel out;

  void entity(std::string& xml, const std::string* parent, int depth) {
    const std::string id = "n" + std::to_string(next_id++);
    const std::string tag = oracle::coin(rng) ? "Activity" : "Product";
    ids.push_back(id);
    out.expected.insert(st("e:" + id, "m:type", Term::literal(tag)));
    if (parent) out.expected.insert(st("e:" + id, "m:containedIn", Term::iri("e:" + *parent)));
    xml += "<" + tag + " id=\"" + id + "\" extra=\"ignored\">";
    const std::size_t attrs = oracle::pick(rng, 3);
    for (std::size_t i = 0; i < attrs; ++i) {
      const std::string value = oracle::coin(rng) ? "Design &amp; test" : "plain";
      const std::string unescaped = value == "plain" ? "plain" : "Design & test";
      const std::string name = "Attr" + std::to_string(i);
      xml += "<" + name + ">  " + value + "\n</" + name + ">";
      out.expected.insert(st("e:" + id, "a:" + name, Term::literal(unescaped)));
    }
    if (!ids.empty() && oracle::coin(rng, 0.4)) {
      const std::string& target = ids[oracle::pick(rng, ids.size())];
      xml += "<uses ref=\"" + target + "\"/>";
      out.expected.insert(st("e:" + id, "r:uses", Term::iri("e:" + target)));
    }
    if (depth < 3) {
      const std::size_t children = oracle::pick(rng, 3);
      for (std::size_t i = 0; i < children; ++i) {
        // Sometimes behind a plain container, which is skipped but keeps containment.
        const bool wrapped = oracle::coin(rng, 0.3);
        if (wrapped) xml += "<Group>";
        entity(xml, &id, depth + 1);
        if (wrapped) xml += "</Group>";
      }
    }
    xml += "</" + tag + ">";
  }
};

RandomModel random_model(oracle::Rng& rng) {
  XmlGen g{rng, 0, {}, {}};
  g.out.xml = "<?xml version=\"1.0\"?>\n<Model>";
  const std::size_t roots = 1 + oracle::pick(rng, 3);
  for (std::size_t i = 0; i < roots; ++i) g.entity(g.out.xml, nullptr, 0);
  g.out.xml += "</Model>\n";
  return g.out;
}

}  // namespace

TEST_CASE("attribute mapping") {
  const auto r = ingest_xml("<M><Activity id=\"a1\"><Name>Design</Name></Activity></M>");
  CHECK(r.graph == ModelGraph({st("e:a1", "m:type", Term::literal("Activity")),
                               st("e:a1", "a:Name", Term::literal("Design"))}));
  CHECK(r.report.entity_count == 1);
  CHECK(r.report.attribute_statement_count == 1);
  CHECK(r.report.relation_statement_count == 0);
  REQUIRE(r.report.skipped.size() == 1);
  CHECK(r.report.skipped.front().path == "/M[1]");
}

TEST_CASE("relation and containment mapping") {
  const auto r = ingest_xml("<M><Activity id=\"a1\"><produces ref=\"p1\"/></Activity><Product id=\"p1\"/></M>");
  CHECK(r.graph.contains(st("e:a1", "r:produces", Term::iri("e:p1"))));
  CHECK(r.report.relation_statement_count == 1);
  const auto nested = ingest_xml("<M><A id=\"x\"><A id=\"y\"/></A></M>");
  CHECK(nested.graph.contains(st("e:y", "m:containedIn", Term::iri("e:x"))));
}

TEST_CASE("options rename the id and ref attributes") {
  IngestOptions o;
  o.id_attribute = "key";
  o.ref_attribute = "to";
  const auto r = ingest_xml("<M><A key=\"a\"><link to=\"b\"/></A><B key=\"b\" id=\"ignored\"/></M>", o);
  CHECK(r.graph.contains(st("e:a", "r:link", Term::iri("e:b"))));
  CHECK(r.report.entity_count == 2);
}

TEST_CASE("skipped elements") {
  const auto r = ingest_xml(
      "<M><Loose>t</Loose><A id=\"a\"><Mixed>text<b/></Mixed><Box><Inner>deep</Inner></Box></A><r ref=\"a\"/></M>");
  std::vector<std::string> reasons;
  for (const auto& s : r.report.skipped) reasons.push_back(s.path + ": " + s.reason);
  CHECK(reasons == std::vector<std::string>{
                       "/M[1]: container without id, ref or text content",
                       "/M[1]/Loose[1]: text element outside an entity element",
                       "/M[1]/A[1]/Mixed[1]: mixed text and element content",
                       "/M[1]/A[1]/Mixed[1]/b[1]: text element outside an entity element",
                       "/M[1]/A[1]/Box[1]: container without id, ref or text content",
                       "/M[1]/A[1]/Box[1]/Inner[1]: text element outside an entity element",
                       "/M[1]/r[1]: reference outside an entity element",
                   });
}

TEST_CASE("errors") {
  CHECK_THROWS_WITH_AS(ingest_xml("<M><A id=\"x\"/><B id=\"x\"/></M>"),
                       doctest::Contains("/M[1]/A[1] and /M[1]/B[1]"), ValidationError);
  CHECK_THROWS_WITH_AS(ingest_xml("<M><A id=\"x\"><uses ref=\"nope\"/><uses ref=\"gone\"/></A></M>"),
                       doctest::Contains("'gone'"), ValidationError);
  CHECK_THROWS_AS(ingest_xml("<M><A id=\"has space\"/></M>"), ValidationError);
  CHECK_THROWS_AS(ingest_xml("<M><A id=\"a\" ref=\"a\"/></M>"), ValidationError);
  try {
    ingest_xml("<M>\n  <A id=\"x\">\n</M>");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("random documents against a direct walk") {
  oracle::Rng rng(8);
  for (int round = 0; round < 200; ++round) {
    const auto m = random_model(rng);
    const auto r = ingest_xml(m.xml);
    INFO(m.xml);
    CHECK(r.graph == ModelGraph({m.expected.begin(), m.expected.end()}));
    std::set<std::string> typed;
    std::size_t attrs = 0, rels = 0;
    for (const auto& s : m.expected) {
      if (s.predicate.value() == "m:type") typed.insert(s.subject.value());
      if (s.predicate.value().starts_with("a:")) ++attrs;
      if (s.predicate.value().starts_with("r:")) ++rels;
    }
    CHECK(r.report.entity_count == typed.size());
    CHECK(r.report.attribute_statement_count == attrs);
    CHECK(r.report.relation_statement_count == rels);
    // Rendering back to XML and re-reading keeps every fact.
    CHECK(ingest_xml(render_model_xml(r.graph)).graph == r.graph);
  }
}

TEST_CASE("rendering rejects graphs outside the convention") {
  CHECK_THROWS_AS(render_model_xml(ModelGraph({st("x:1", "m:type", Term::literal("A"))})), ValidationError);
  CHECK_THROWS_AS(render_model_xml(ModelGraph({st("e:a", "m:type", Term::literal("A")),
                                               st("e:a", "m:containedIn", Term::iri("e:b")),
                                               st("e:b", "m:type", Term::literal("A")),
                                               st("e:b", "m:containedIn", Term::iri("e:a"))})),
                  ValidationError);
}

TEST_CASE("report rendering") {
  const auto r = ingest_xml("<M><A id=\"a\"><Name>n</Name></A></M>");
  CHECK(render_report_json(r.report) ==
        "{\n  \"entityCount\": 1,\n  \"attributeStatementCount\": 1,\n  \"relationStatementCount\": 0,\n"
        "  \"skippedElements\": [\n    {\n      \"path\": \"/M[1]\",\n"
        "      \"reason\": \"container without id, ref or text content\"\n    }\n  ]\n}\n");
  CHECK(render_report_table(r.report).starts_with("metric"));
}
