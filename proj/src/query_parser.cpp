#include <algorithm>
#include <cctype>
#include <set>

#include "modeldelta/error.hpp"
#include "modeldelta/query.hpp"

namespace modeldelta {

namespace {

struct VarUse {
  std::string name;
  std::size_t line, column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Query parse() {
    Query q;
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) q.distinct = true;
    if (accept_keyword("COUNT")) {
      q.count = true;
      expect_char('(');
      if (accept_keyword("DISTINCT")) q.count_distinct = true;
      q.projection.push_back(read_variable_name(&projection_uses_));
      expect_char(')');
    } else {
      while (peek() == '?') q.projection.push_back(read_variable_name(&projection_uses_));
      if (q.projection.empty()) fail("expected a variable or COUNT after SELECT");
    }
    expect_keyword("WHERE");
    q.where = parse_group();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected text after query");
    check_semantics(q);
    return q;
  }

 private:
  std::vector<Clause> parse_group() {
    expect_char('{');
    std::vector<Clause> clauses;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated group, expected '}'");
      if (text_[pos_] == '}') {
        ++pos_;
        return clauses;
      }
      if (accept_keyword("FILTER")) {
        clauses.emplace_back(parse_filter());
      } else if (accept_keyword("NOT")) {
        expect_keyword("EXISTS");
        clauses.emplace_back(NotExists{parse_group()});
      } else {
        clauses.emplace_back(parse_triple());
      }
    }
  }

  Filter parse_filter() {
    Filter f;
    f.lhs = read_term(&filter_uses_);
    skip_space();
    const auto rest = text_.substr(pos_);
    if (rest.starts_with("!=")) {
      f.op = Comparison::ne;
      pos_ += 2;
    } else if (rest.starts_with("<=")) {
      f.op = Comparison::le;
      pos_ += 2;
    } else if (rest.starts_with(">=")) {
      f.op = Comparison::ge;
      pos_ += 2;
    } else if (rest.starts_with("=")) {
      f.op = Comparison::eq;
      ++pos_;
    } else if (rest.starts_with("<")) {
      f.op = Comparison::lt;
      ++pos_;
    } else if (rest.starts_with(">")) {
      f.op = Comparison::gt;
      ++pos_;
    } else {
      fail("expected comparison operator (= != < <= > >=)");
    }
    f.rhs = read_term(&filter_uses_);
    return f;
  }

  TriplePattern parse_triple() {
    TriplePattern t;
    t.subject = read_term(nullptr);
    if (std::holds_alternative<Term>(t.subject) && !std::get<Term>(t.subject).is_iri())
      fail_at(last_term_line_, last_term_col_, "subject must be a variable or IRI");
    t.predicate = read_term(nullptr);
    if (std::holds_alternative<Term>(t.predicate) && !std::get<Term>(t.predicate).is_iri())
      fail_at(last_term_line_, last_term_col_, "predicate must be a variable or IRI");
    t.object = read_term(nullptr);
    skip_space();
    if (text_.substr(pos_).starts_with("@[")) {
      pos_ += 2;
      while (true) {
        skip_space();
        OriginConstraint c;
        if (peek() == '+') {
          c.required = true;
        } else if (peek() == '-') {
          c.required = false;
        } else {
          fail("expected '+' or '-' before origin label");
        }
        ++pos_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && label_char(text_[pos_])) ++pos_;
        if (pos_ == start) fail("expected origin label");
        c.label = std::string(text_.substr(start, pos_ - start));
        t.origins.push_back(std::move(c));
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect_char(']');
        break;
      }
    }
    expect_char('.');
    return t;
  }

  PatternTerm read_term(std::vector<VarUse>* uses) {
    skip_space();
    location(pos_, last_term_line_, last_term_col_);
    const char c = peek();
    if (c == '?') return Variable{read_variable_name(uses)};
    if (c == '<') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '>') {
        const char ch = text_[pos_];
        if (ch == ' ' || ch == '<' || ch == '"' || ch == '\n' || ch == '\t') fail("invalid character in IRI");
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated IRI");
      if (pos_ == start) fail("empty IRI");
      std::string value(text_.substr(start, pos_ - start));
      ++pos_;
      return Term::iri(std::move(value));
    }
    if (c == '"') {
      ++pos_;
      std::string value;
      while (true) {
        if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string literal");
        const char ch = text_[pos_++];
        if (ch == '"') break;
        if (ch != '\\') {
          value += ch;
          continue;
        }
        if (pos_ >= text_.size()) fail("unterminated string literal");
        switch (text_[pos_]) {
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          default: fail("bad escape in string literal");
        }
        ++pos_;
      }
      return Term::literal(std::move(value));
    }
    fail("expected a variable, IRI or string literal");
  }

  std::string read_variable_name(std::vector<VarUse>* uses) {
    skip_space();
    if (peek() != '?') fail("expected variable");
    std::size_t line, col;
    location(pos_, line, col);
    ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("empty variable name");
    std::string name(text_.substr(start, pos_ - start));
    if (uses) uses->push_back({name, line, col});
    return name;
  }

  static bool label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept_keyword(std::string_view kw) {
    skip_space();
    if (text_.size() - pos_ < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    const std::size_t after = pos_ + kw.size();
    if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
      return false;
    pos_ = after;
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }

  void expect_char(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void location(std::size_t offset, std::size_t& line, std::size_t& col) const {
    line = 1;
    col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line, col;
    location(pos_, line, col);
    throw ParseError(message, line, col);
  }

  [[noreturn]] static void fail_at(std::size_t line, std::size_t col, const std::string& message) {
    throw ParseError(message, line, col);
  }

  // Semantic pass. Filter variable uses were recorded in source order, which
  // matches the pre-order walk below.
  void check_semantics(const Query& q) {
    std::set<std::string> top;
    bound_by_triples(q.where, top);
    for (const auto& use : projection_uses_)
      if (!top.contains(use.name))
        fail_at(use.line, use.column, "projected variable ?" + use.name + " is not bound by any triple pattern");
    std::size_t next_filter_use = 0;
    check_group(q.where, {}, next_filter_use);
  }

  static void bound_by_triples(const std::vector<Clause>& group, std::set<std::string>& out) {
    auto add = [&](const PatternTerm& t) {
      if (auto v = std::get_if<Variable>(&t)) out.insert(v->name);
    };
    for (const auto& c : group)
      if (auto t = std::get_if<TriplePattern>(&c)) {
        add(t->subject);
        add(t->predicate);
        add(t->object);
      }
  }

  void check_group(const std::vector<Clause>& group, std::set<std::string> scope, std::size_t& next_use) {
    bound_by_triples(group, scope);
    for (const auto& c : group) {
      if (auto f = std::get_if<Filter>(&c)) {
        for (const PatternTerm* t : {&f->lhs, &f->rhs}) {
          if (!std::holds_alternative<Variable>(*t)) continue;
          const VarUse& use = filter_uses_.at(next_use++);
          if (!scope.contains(use.name))
            fail_at(use.line, use.column, "variable ?" + use.name + " in FILTER is not bound by any triple pattern");
        }
      } else if (auto n = std::get_if<NotExists>(&c)) {
        check_group(n->clauses, scope, next_use);
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t last_term_line_ = 0, last_term_col_ = 0;
  std::vector<VarUse> projection_uses_;
  std::vector<VarUse> filter_uses_;
};

void write_term(std::string& out, const PatternTerm& t) {
  if (auto v = std::get_if<Variable>(&t)) {
    out += "?" + v->name;
  } else {
    out += std::get<Term>(t).to_string();
  }
}

const char* comparison_text(Comparison op) {
  switch (op) {
    case Comparison::eq: return "=";
    case Comparison::ne: return "!=";
    case Comparison::lt: return "<";
    case Comparison::le: return "<=";
    case Comparison::gt: return ">";
    case Comparison::ge: return ">=";
  }
  return "?";
}

void write_group(std::string& out, const std::vector<Clause>& group, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& c : group) {
    out += indent;
    if (auto t = std::get_if<TriplePattern>(&c)) {
      write_term(out, t->subject);
      out += ' ';
      write_term(out, t->predicate);
      out += ' ';
      write_term(out, t->object);
      if (!t->origins.empty()) {
        out += " @[";
        for (std::size_t i = 0; i < t->origins.size(); ++i) {
          if (i > 0) out += ',';
          out += t->origins[i].required ? '+' : '-';
          out += t->origins[i].label;
        }
        out += ']';
      }
      out += " .\n";
    } else if (auto f = std::get_if<Filter>(&c)) {
      out += "FILTER ";
      write_term(out, f->lhs);
      out += ' ';
      out += comparison_text(f->op);
      out += ' ';
      write_term(out, f->rhs);
      out += '\n';
    } else {
      out += "NOT EXISTS {\n";
      write_group(out, std::get<NotExists>(c).clauses, depth + 1);
      out += indent + "}\n";
    }
  }
}

void rename_group(std::vector<Clause>& group, const std::unordered_map<std::string, std::string>& renames) {
  for (auto& c : group) {
    if (auto t = std::get_if<TriplePattern>(&c)) {
      for (auto& o : t->origins)
        if (auto it = renames.find(o.label); it != renames.end()) o.label = it->second;
    } else if (auto n = std::get_if<NotExists>(&c)) {
      rename_group(n->clauses, renames);
    }
  }
}

void collect_labels(const std::vector<Clause>& group, std::set<std::string>& out) {
  for (const auto& c : group) {
    if (auto t = std::get_if<TriplePattern>(&c)) {
      for (const auto& o : t->origins) out.insert(o.label);
    } else if (auto n = std::get_if<NotExists>(&c)) {
      collect_labels(n->clauses, out);
    }
  }
}

}  // namespace

Query parse_query(std::string_view text) { return Parser(text).parse(); }

std::string to_text(const Query& q) {
  std::string out = "SELECT ";
  if (q.distinct) out += "DISTINCT ";
  if (q.count) {
    out += "COUNT(";
    if (q.count_distinct) out += "DISTINCT ";
    out += "?" + q.projection.front() + ")";
  } else {
    for (std::size_t i = 0; i < q.projection.size(); ++i) {
      if (i > 0) out += ' ';
      out += "?" + q.projection[i];
    }
  }
  out += " WHERE {\n";
  write_group(out, q.where, 1);
  out += "}\n";
  return out;
}

Query rename_labels(const Query& q, const std::unordered_map<std::string, std::string>& renames) {
  Query out = q;
  rename_group(out.where, renames);
  return out;
}

std::vector<std::string> referenced_labels(const Query& q) {
  std::set<std::string> labels;
  collect_labels(q.where, labels);
  return {labels.begin(), labels.end()};
}

}  // namespace modeldelta
