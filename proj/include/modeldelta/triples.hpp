#pragma once

// Core triple model: terms, statements and duplicate-free graphs, plus the
// canonical line format (.nt3).
//
//   <subject> <predicate> <object-iri>
//   <subject> <predicate> "escaped literal"
//
// Lines are LF-terminated and sorted by statement_order. Literal escapes are
// exactly \\ \" \n \t.

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modeldelta {

enum class TermKind : unsigned char { iri = 0, literal = 1 };

/// An IRI or a plain literal. Ordered by kind (IRIs first), then bytewise.
class Term {
 public:
  Term() = default;

  /// Throws ValidationError if the value is empty or contains a space, `<`,
  /// `>`, `"`, LF or TAB.
  static Term iri(std::string value);
  static Term literal(std::string value) { return Term(TermKind::literal, std::move(value)); }

  static bool valid_iri(std::string_view value) noexcept;

  TermKind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == TermKind::iri; }
  bool is_literal() const noexcept { return kind_ == TermKind::literal; }
  const std::string& value() const noexcept { return value_; }

  /// `<value>` or `"escaped"`.
  std::string to_string() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  Term(TermKind kind, std::string value) : kind_(kind), value_(std::move(value)) {}

  TermKind kind_ = TermKind::iri;
  std::string value_;
};

struct Statement {
  Term subject;
  Term predicate;
  Term object;

  /// Throws ValidationError unless subject and predicate are IRIs.
  static Statement make(Term subject, Term predicate, Term object);

  std::string to_string() const;

  friend bool operator==(const Statement&, const Statement&) = default;
  friend std::strong_ordering operator<=>(const Statement&, const Statement&) = default;
};

/// Canonical total order: subject bytes, predicate bytes, object kind, object bytes.
std::strong_ordering statement_order(const Statement& a, const Statement& b) noexcept;

/// One model version: a set of statements kept in canonical order.
class ModelGraph {
 public:
  ModelGraph() = default;
  /// Sorts and removes duplicates.
  explicit ModelGraph(std::vector<Statement> statements, std::optional<std::string> label = {});

  std::span<const Statement> statements() const noexcept { return statements_; }
  std::size_t size() const noexcept { return statements_.size(); }
  bool empty() const noexcept { return statements_.empty(); }
  bool contains(const Statement& s) const;

  const std::optional<std::string>& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  auto begin() const noexcept { return statements_.begin(); }
  auto end() const noexcept { return statements_.end(); }

  /// Statement-set equality; the label is not compared.
  friend bool operator==(const ModelGraph& a, const ModelGraph& b) {
    return a.statements_ == b.statements_;
  }

 private:
  std::vector<Statement> statements_;
  std::optional<std::string> label_;
};

std::string escape_literal(std::string_view raw);

/// Canonical .nt3 bytes; empty graph gives an empty string.
std::string serialize_graph(const ModelGraph& graph);

/// Parses .nt3 text. Line order is free and duplicates collapse. Throws
/// ParseError carrying the 1-based line number.
ModelGraph parse_graph(std::string_view text);

namespace detail {

/// Cursor-based reader shared by the .nt3 and .ntc parsers. Positions are
/// byte offsets into a single line.
struct LineReader {
  std::string_view line;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& message) const;
  bool at_end() const noexcept { return pos >= line.size(); }
  void expect(char c, const char* what);
  Term read_iri();
  Term read_literal();
  Term read_term();
};

Statement read_statement(LineReader& reader);

}  // namespace detail

}  // namespace modeldelta

template <>
struct std::hash<modeldelta::Term> {
  std::size_t operator()(const modeldelta::Term& t) const noexcept {
    return std::hash<std::string_view>{}(t.value()) * 31u + static_cast<std::size_t>(t.kind());
  }
};

template <>
struct std::hash<modeldelta::Statement> {
  std::size_t operator()(const modeldelta::Statement& s) const noexcept {
    std::hash<modeldelta::Term> h;
    std::size_t seed = h(s.subject);
    seed ^= h(s.predicate) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(s.object) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
  }
};
