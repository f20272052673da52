#pragma once

// DeltaQuery: a small SPARQL-like pattern language over comparison models.
//
//   query     := "SELECT" "DISTINCT"? (var+ | "COUNT" "(" "DISTINCT"? var ")")
//                "WHERE" "{" clause* "}"
//   clause    := triple | filter | notexists
//   triple    := term term term origins? "."
//   origins   := "@[" ("+"|"-") label ("," ("+"|"-") label)* "]"
//   filter    := "FILTER" term cmp term          cmp: = != < <= > >=
//   notexists := "NOT" "EXISTS" "{" clause* "}"
//
// A triple pattern matches a comparison entry when its terms unify and the
// entry's origin set contains every +label and none of the -labels. Filters
// and NOT EXISTS groups are conjunctive: they apply once every variable they
// share with the enclosing pattern is bound, wherever they are written.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "modeldelta/compare.hpp"
#include "modeldelta/triples.hpp"

namespace modeldelta {

struct Variable {
  std::string name;  ///< without the leading '?'
  friend bool operator==(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct OriginConstraint {
  bool required;  ///< true for +label, false for -label
  std::string label;
  friend bool operator==(const OriginConstraint&, const OriginConstraint&) = default;
};

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  std::vector<OriginConstraint> origins;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class Comparison { eq, ne, lt, le, gt, ge };

struct Filter {
  PatternTerm lhs;
  Comparison op;
  PatternTerm rhs;
  friend bool operator==(const Filter&, const Filter&) = default;
};

struct NotExists;
using Clause = std::variant<TriplePattern, Filter, NotExists>;

struct NotExists {
  std::vector<Clause> clauses;
  friend bool operator==(const NotExists&, const NotExists&) = default;
};

struct Query {
  bool distinct = false;
  /// Projected variables; for a COUNT query, the single counted variable.
  std::vector<std::string> projection;
  bool count = false;
  bool count_distinct = false;
  std::vector<Clause> where;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Throws ParseError with line/column on syntax errors, and on semantic
/// errors: projected or filtered variables that no positive triple pattern
/// in scope can bind.
Query parse_query(std::string_view text);

/// Canonical text form; parse_query(to_text(q)) == q.
std::string to_text(const Query& q);

/// Copy of `q` with origin labels renamed; labels missing from the map stay.
Query rename_labels(const Query& q, const std::unordered_map<std::string, std::string>& renames);

/// Labels referenced by origin constraints, sorted and unique.
std::vector<std::string> referenced_labels(const Query& q);

struct BindingTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;
  bool is_count = false;

  /// The single cell of a COUNT result.
  std::size_t count() const;

  friend bool operator==(const BindingTable&, const BindingTable&) = default;
};

/// Interned view of a comparison model with the two lookup indexes used for
/// pattern matching: by predicate and by (subject, predicate). Entries are
/// kept in canonical order, so a subject alone also resolves to one range.
class QueryIndex {
 public:
  using TermId = std::uint32_t;
  static constexpr TermId no_term = ~TermId{0};

  struct IdEntry {
    TermId subject, predicate, object;
    OriginSet origins;
  };
  struct Range {
    std::uint32_t begin = 0, end = 0;
  };

  explicit QueryIndex(const ComparisonModel& model);

  const ComparisonModel& model() const noexcept { return *model_; }
  const std::vector<IdEntry>& entries() const noexcept { return entries_; }
  const Term& term(TermId id) const { return terms_[id]; }
  TermId find(const Term& t) const;
  std::size_t term_count() const noexcept { return terms_.size(); }

  Range subject_range(TermId s) const;
  Range subject_predicate_range(TermId s, TermId p) const;
  const std::vector<std::uint32_t>& by_predicate(TermId p) const;

 private:
  const ComparisonModel* model_;
  std::vector<Term> terms_;
  std::unordered_map<Term, TermId> ids_;
  std::vector<IdEntry> entries_;
  std::unordered_map<TermId, Range> subject_ranges_;
  std::unordered_map<std::uint64_t, Range> subject_predicate_ranges_;
  std::unordered_map<TermId, std::vector<std::uint32_t>> predicate_lists_;
};

/// Throws UsageError when the query names a label the model does not have.
BindingTable evaluate(const QueryIndex& index, const Query& q);
BindingTable evaluate(const ComparisonModel& model, const Query& q);

enum class OutputFormat { table, csv, json };

/// Throws UsageError for unknown names.
OutputFormat parse_output_format(std::string_view name);

std::string render(const BindingTable& table, OutputFormat format);

}  // namespace modeldelta
