#pragma once

// XML to triples under a fixed convention:
//
//  * an element carrying the id attribute is an entity e:<id>, typed by its
//    tag: (e:<id>, m:type, "<tag>");
//  * a text-only child of an entity without id/ref attributes is an attribute:
//    (e:<id>, a:<childTag>, "<trimmed text>");
//  * a child of an entity carrying the ref attribute is a relation:
//    (e:<id>, r:<childTag>, e:<ref>);
//  * an entity nested (at any depth) inside another entity is contained in
//    the nearest one: (e:<child>, m:containedIn, e:<parent>).
//
// Everything else is listed in the report as skipped.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modeldelta/triples.hpp"

namespace modeldelta {

struct IngestOptions {
  std::string id_attribute = "id";
  std::string ref_attribute = "ref";
};

struct SkippedElement {
  std::string path;  ///< e.g. /M[1]/Activities[1]
  std::string reason;
  friend bool operator==(const SkippedElement&, const SkippedElement&) = default;
};

struct IngestReport {
  std::size_t entity_count = 0;
  std::size_t attribute_statement_count = 0;
  std::size_t relation_statement_count = 0;
  std::vector<SkippedElement> skipped;
};

struct IngestResult {
  ModelGraph graph;
  IngestReport report;
};

/// Throws ParseError (with line/column) for malformed XML and
/// ValidationError for duplicate ids, dangling references, or ids that are
/// not valid IRI characters.
IngestResult ingest_xml(std::string_view xml, const IngestOptions& options = {});

/// Inverse of the convention for graphs that follow it: entities nest by
/// m:containedIn under a <Model> root, attributes and relations become child
/// elements. Throws ValidationError for graphs that cannot be expressed
/// (non-entity subjects, predicates that are not XML names, cycles).
std::string render_model_xml(const ModelGraph& graph, const IngestOptions& options = {});

std::string render_report_table(const IngestReport& report);
std::string render_report_json(const IngestReport& report);

}  // namespace modeldelta
