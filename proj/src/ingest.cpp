#include "modeldelta/ingest.hpp"

#include <expat.h>

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/vocab.hpp"
#include "render_util.hpp"

namespace modeldelta {

namespace {

constexpr std::size_t no_node = static_cast<std::size_t>(-1);

struct Node {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::size_t> children;
  std::string text;
  std::size_t parent = no_node;
  std::string path;

  const std::string* attribute(const std::string& name) const {
    for (const auto& [k, v] : attributes)
      if (k == name) return &v;
    return nullptr;
  }
};

bool xml_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && xml_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && xml_space(s.back())) s.remove_suffix(1);
  return s;
}

struct TreeBuilder {
  std::vector<Node> nodes;
  std::vector<std::size_t> stack;
  // Per open element: count of children seen so far, keyed by tag.
  std::vector<std::map<std::string, std::size_t>> sibling_counts{1};

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(data);
    Node n;
    n.tag = name;
    for (std::size_t i = 0; attrs[i] != nullptr; i += 2) n.attributes.emplace_back(attrs[i], attrs[i + 1]);
    n.parent = self->stack.empty() ? no_node : self->stack.back();
    const std::size_t ordinal = ++self->sibling_counts.back()[n.tag];
    n.path = (n.parent == no_node ? std::string() : self->nodes[n.parent].path) + "/" + n.tag + "[" +
             std::to_string(ordinal) + "]";
    const std::size_t idx = self->nodes.size();
    if (n.parent != no_node) self->nodes[n.parent].children.push_back(idx);
    self->nodes.push_back(std::move(n));
    self->stack.push_back(idx);
    self->sibling_counts.emplace_back();
  }

  static void on_end(void* data, const XML_Char*) {
    auto* self = static_cast<TreeBuilder*>(data);
    self->stack.pop_back();
    self->sibling_counts.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(data);
    if (!self->stack.empty()) self->nodes[self->stack.back()].text.append(s, static_cast<std::size_t>(len));
  }
};

std::vector<Node> parse_tree(std::string_view xml) {
  TreeBuilder builder;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate(nullptr), &XML_ParserFree);
  if (!parser) throw Error(ErrorKind::io, "cannot allocate XML parser");
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &TreeBuilder::on_start, &TreeBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &TreeBuilder::on_text);

  constexpr std::size_t chunk = 1 << 20;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(chunk, xml.size() - offset);
    const bool last = offset + n == xml.size();
    if (XML_Parse(parser.get(), xml.data() + offset, static_cast<int>(n), last) == XML_STATUS_ERROR) {
      throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                       XML_GetCurrentLineNumber(parser.get()),
                       XML_GetCurrentColumnNumber(parser.get()) + 1);
    }
    offset += n;
  } while (offset < xml.size());
  return std::move(builder.nodes);
}

bool xml_name(std::string_view s) {
  if (s.empty()) return false;
  auto start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
  });
}

std::string xml_escape(std::string_view s, bool attribute) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out += c;
    }
  }
  return out;
}

}  // namespace

IngestResult ingest_xml(std::string_view xml, const IngestOptions& options) {
  const std::vector<Node> nodes = parse_tree(xml);
  const std::string& id_attr = options.id_attribute;
  const std::string& ref_attr = options.ref_attribute;

  std::unordered_map<std::string, std::size_t> id_owner;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string* id = nodes[i].attribute(id_attr);
    if (!id) continue;
    if (nodes[i].attribute(ref_attr))
      throw ValidationError(nodes[i].path + ": element carries both '" + id_attr + "' and '" + ref_attr + "'");
    if (!Term::valid_iri(*id))
      throw ValidationError(nodes[i].path + ": identifier '" + *id + "' contains characters not allowed in an IRI");
    auto [it, inserted] = id_owner.try_emplace(*id, i);
    if (!inserted)
      throw ValidationError("duplicate id '" + *id + "' on " + nodes[it->second].path + " and " + nodes[i].path);
  }

  auto entity_iri = [](const std::string& id) { return Term::iri(std::string(vocab::entity_prefix) + id); };
  const Term type_pred = Term::iri(std::string(vocab::type));
  const Term contained_pred = Term::iri(std::string(vocab::contained_in));

  std::vector<Statement> statements;
  IngestReport report;
  std::vector<std::string> dangling;

  // Nearest entity ancestor of each node, computed in document order.
  std::vector<std::size_t> owner(nodes.size(), no_node);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.parent != no_node) owner[i] = nodes[n.parent].attribute(id_attr) ? n.parent : owner[n.parent];

    const bool parent_is_entity = n.parent != no_node && nodes[n.parent].attribute(id_attr);
    if (const std::string* id = n.attribute(id_attr)) {
      statements.push_back({entity_iri(*id), type_pred, Term::literal(n.tag)});
      if (owner[i] != no_node)
        statements.push_back({entity_iri(*id), contained_pred, entity_iri(*nodes[owner[i]].attribute(id_attr))});
      continue;
    }
    if (const std::string* ref = n.attribute(ref_attr)) {
      if (!parent_is_entity) {
        report.skipped.push_back({n.path, "reference outside an entity element"});
        continue;
      }
      if (!id_owner.contains(*ref)) {
        dangling.push_back(n.path + " -> '" + *ref + "'");
        continue;
      }
      statements.push_back({entity_iri(*nodes[n.parent].attribute(id_attr)),
                            Term::iri(std::string(vocab::relation_prefix) + n.tag), entity_iri(*ref)});
      continue;
    }
    if (n.children.empty()) {
      if (!parent_is_entity) {
        report.skipped.push_back({n.path, "text element outside an entity element"});
        continue;
      }
      statements.push_back({entity_iri(*nodes[n.parent].attribute(id_attr)),
                            Term::iri(std::string(vocab::attribute_prefix) + n.tag),
                            Term::literal(std::string(trim(n.text)))});
      continue;
    }
    if (!trim(n.text).empty()) {
      report.skipped.push_back({n.path, "mixed text and element content"});
    } else {
      report.skipped.push_back({n.path, "container without id, ref or text content"});
    }
  }

  if (!dangling.empty()) {
    std::string msg = "dangling references:";
    for (const auto& d : dangling) msg += "\n  " + d;
    throw ValidationError(msg);
  }

  ModelGraph graph(std::move(statements));
  std::set<std::string_view> entities;
  for (const auto& s : graph) {
    const auto& p = s.predicate.value();
    if (p == vocab::type) entities.insert(s.subject.value());
    if (vocab::is_attribute_predicate(p)) ++report.attribute_statement_count;
    if (vocab::is_relation_predicate(p)) ++report.relation_statement_count;
  }
  report.entity_count = entities.size();
  return {std::move(graph), std::move(report)};
}

std::string render_model_xml(const ModelGraph& graph, const IngestOptions& options) {
  struct Entity {
    std::string id;
    std::string type;
    std::string parent;
    std::vector<const Statement*> attributes;
    std::vector<const Statement*> relations;
    std::vector<std::string> children;
  };
  std::map<std::string, Entity> entities;

  auto entity_id = [](const Term& t) -> std::string {
    if (!t.is_iri() || !t.value().starts_with(vocab::entity_prefix))
      throw ValidationError("not an entity IRI: " + t.to_string());
    return t.value().substr(vocab::entity_prefix.size());
  };

  for (const auto& s : graph) {
    if (s.predicate.value() != vocab::type) continue;
    Entity& e = entities[entity_id(s.subject)];
    if (!e.type.empty()) throw ValidationError("entity with several types: " + s.subject.to_string());
    if (!s.object.is_literal() || !xml_name(s.object.value()))
      throw ValidationError("entity type is not an XML name: " + s.to_string());
    e.id = entity_id(s.subject);
    e.type = s.object.value();
  }
  auto find = [&](const Term& t) -> Entity& {
    auto it = entities.find(entity_id(t));
    if (it == entities.end()) throw ValidationError("statement about an untyped entity: " + t.to_string());
    return it->second;
  };

  for (const auto& s : graph) {
    const std::string& p = s.predicate.value();
    if (p == vocab::type) continue;
    Entity& e = find(s.subject);
    if (p == vocab::contained_in) {
      if (!e.parent.empty()) throw ValidationError("entity with several parents: " + s.subject.to_string());
      e.parent = find(s.object).id;
    } else if (vocab::is_attribute_predicate(p) && s.object.is_literal()) {
      const std::string_view text = s.object.value();
      if (!xml_name(p.substr(2)) || trim(text) != text || text.find('\r') != std::string_view::npos)
        throw ValidationError("attribute cannot be expressed in XML: " + s.to_string());
      e.attributes.push_back(&s);
    } else if (vocab::is_relation_predicate(p) && s.object.is_iri()) {
      if (!xml_name(p.substr(2))) throw ValidationError("relation name is not an XML name: " + s.to_string());
      find(s.object);
      e.relations.push_back(&s);
    } else {
      throw ValidationError("statement outside the XML convention: " + s.to_string());
    }
  }

  std::vector<std::string> roots;
  for (auto& [id, e] : entities) {
    if (e.parent.empty()) {
      roots.push_back(id);
    } else {
      entities[e.parent].children.push_back(id);
    }
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<Model>\n";
  std::size_t emitted = 0;
  auto emit = [&](auto&& self, const std::string& id, std::size_t depth) -> void {
    const Entity& e = entities.at(id);
    ++emitted;
    const std::string indent(depth * 2, ' ');
    out += indent + "<" + e.type + " " + options.id_attribute + "=\"" + xml_escape(e.id, true) + "\"";
    if (e.attributes.empty() && e.relations.empty() && e.children.empty()) {
      out += "/>\n";
      return;
    }
    out += ">\n";
    for (const Statement* s : e.attributes) {
      const std::string name = s->predicate.value().substr(2);
      out += indent + "  <" + name + ">" + xml_escape(s->object.value(), false) + "</" + name + ">\n";
    }
    for (const Statement* s : e.relations) {
      out += indent + "  <" + s->predicate.value().substr(2) + " " + options.ref_attribute + "=\"" +
             xml_escape(entity_id(s->object), true) + "\"/>\n";
    }
    for (const auto& child : e.children) self(self, child, depth + 1);
    out += indent + "</" + e.type + ">\n";
  };
  for (const auto& r : roots) emit(emit, r, 1);
  if (emitted != entities.size()) throw ValidationError("containment cycle in model");
  out += "</Model>\n";
  return out;
}

std::string render_report_table(const IngestReport& report) {
  std::string out = detail::aligned_table(
      {"metric", "count"},
      {{"entities", std::to_string(report.entity_count)},
       {"attribute statements", std::to_string(report.attribute_statement_count)},
       {"relation statements", std::to_string(report.relation_statement_count)},
       {"skipped elements", std::to_string(report.skipped.size())}},
      {false, true});
  if (!report.skipped.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : report.skipped) rows.push_back({s.path, s.reason});
    out += "\n" + detail::aligned_table({"skipped element", "reason"}, rows, {});
  }
  return out;
}

std::string render_report_json(const IngestReport& report) {
  nlohmann::ordered_json j;
  j["entityCount"] = report.entity_count;
  j["attributeStatementCount"] = report.attribute_statement_count;
  j["relationStatementCount"] = report.relation_statement_count;
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : report.skipped) skipped.push_back({{"path", s.path}, {"reason", s.reason}});
  j["skippedElements"] = std::move(skipped);
  return j.dump(2) + "\n";
}

}  // namespace modeldelta
