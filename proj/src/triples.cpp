#include "modeldelta/triples.hpp"

#include <algorithm>

#include "modeldelta/error.hpp"

namespace modeldelta {

bool Term::valid_iri(std::string_view value) noexcept {
  if (value.empty()) return false;
  return value.find_first_of(std::string_view(" <>\"\n\t", 6)) == std::string_view::npos;
}

Term Term::iri(std::string value) {
  if (!valid_iri(value)) throw ValidationError("invalid IRI '" + value + "'");
  return Term(TermKind::iri, std::move(value));
}

std::string Term::to_string() const {
  if (is_iri()) return "<" + value_ + ">";
  return "\"" + escape_literal(value_) + "\"";
}

Statement Statement::make(Term subject, Term predicate, Term object) {
  if (!subject.is_iri() || !predicate.is_iri())
    throw ValidationError("statement subject and predicate must be IRIs");
  return Statement{std::move(subject), std::move(predicate), std::move(object)};
}

std::string Statement::to_string() const {
  std::string out = subject.to_string();
  out += ' ';
  out += predicate.to_string();
  out += ' ';
  out += object.to_string();
  return out;
}

std::strong_ordering statement_order(const Statement& a, const Statement& b) noexcept {
  return a <=> b;
}

ModelGraph::ModelGraph(std::vector<Statement> statements, std::optional<std::string> label)
    : statements_(std::move(statements)), label_(std::move(label)) {
  std::sort(statements_.begin(), statements_.end());
  statements_.erase(std::unique(statements_.begin(), statements_.end()), statements_.end());
}

bool ModelGraph::contains(const Statement& s) const {
  return std::binary_search(statements_.begin(), statements_.end(), s);
}

std::string escape_literal(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string serialize_graph(const ModelGraph& graph) {
  std::string out;
  for (const auto& s : graph) {
    out += s.to_string();
    out += '\n';
  }
  return out;
}

namespace detail {

void LineReader::fail(const std::string& message) const {
  throw ParseError(message, line_no, pos + 1);
}

void LineReader::expect(char c, const char* what) {
  if (at_end() || line[pos] != c) fail(std::string("expected ") + what);
  ++pos;
}

Term LineReader::read_iri() {
  expect('<', "'<'");
  const std::size_t start = pos;
  while (!at_end() && line[pos] != '>') {
    const char c = line[pos];
    if (c == ' ' || c == '<' || c == '"' || c == '\t') fail("invalid character in IRI");
    ++pos;
  }
  if (at_end()) fail("unterminated IRI");
  if (pos == start) fail("empty IRI");
  std::string value(line.substr(start, pos - start));
  ++pos;
  return Term::iri(std::move(value));
}

Term LineReader::read_literal() {
  expect('"', "'\"'");
  std::string value;
  while (true) {
    if (at_end()) fail("unterminated quote");
    const char c = line[pos++];
    if (c == '"') break;
    if (c != '\\') {
      value += c;
      continue;
    }
    if (at_end()) fail("unterminated quote");
    switch (line[pos]) {
      case '\\': value += '\\'; break;
      case '"': value += '"'; break;
      case 'n': value += '\n'; break;
      case 't': value += '\t'; break;
      default: fail(std::string("bad escape '\\") + line[pos] + "'");
    }
    ++pos;
  }
  return Term::literal(std::move(value));
}

Term LineReader::read_term() {
  if (at_end()) fail("missing object");
  if (line[pos] == '<') return read_iri();
  if (line[pos] == '"') return read_literal();
  fail("expected IRI or literal");
}

Statement read_statement(LineReader& reader) {
  if (reader.at_end()) reader.fail("missing subject");
  Term subject = reader.read_iri();
  reader.expect(' ', "single space after subject");
  if (reader.at_end()) reader.fail("missing predicate");
  Term predicate = reader.read_iri();
  reader.expect(' ', "single space after predicate");
  Term object = reader.read_term();
  return Statement{std::move(subject), std::move(predicate), std::move(object)};
}

}  // namespace detail

ModelGraph parse_graph(std::string_view text) {
  std::vector<Statement> statements;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    detail::LineReader reader{text.substr(start, end - start), line_no, 0};
    statements.push_back(detail::read_statement(reader));
    if (!reader.at_end()) reader.fail("trailing characters after object");
    start = end + 1;
  }
  return ModelGraph(std::move(statements));
}

}  // namespace modeldelta
