#include <algorithm>
#include <deque>
#include <functional>
#include <memory>
#include <numeric>
#include <set>

#include "modeldelta/error.hpp"
#include "modeldelta/query.hpp"

namespace modeldelta {

QueryIndex::QueryIndex(const ComparisonModel& model) : model_(&model) {
  auto intern = [&](const Term& t) {
    auto [it, inserted] = ids_.try_emplace(t, static_cast<TermId>(terms_.size()));
    if (inserted) terms_.push_back(t);
    return it->second;
  };
  entries_.reserve(model.size());
  for (const auto& e : model.entries())
    entries_.push_back({intern(e.statement.subject), intern(e.statement.predicate),
                        intern(e.statement.object), e.origins});

  // Canonical order groups equal subjects, and equal (subject, predicate)
  // pairs, into contiguous runs.
  for (std::uint32_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    auto& sr = subject_ranges_[e.subject];
    if (sr.end == 0) sr.begin = i;
    sr.end = i + 1;
    auto& spr = subject_predicate_ranges_[(std::uint64_t{e.subject} << 32) | e.predicate];
    if (spr.end == 0) spr.begin = i;
    spr.end = i + 1;
    predicate_lists_[e.predicate].push_back(i);
  }
}

QueryIndex::TermId QueryIndex::find(const Term& t) const {
  auto it = ids_.find(t);
  return it == ids_.end() ? no_term : it->second;
}

QueryIndex::Range QueryIndex::subject_range(TermId s) const {
  auto it = subject_ranges_.find(s);
  return it == subject_ranges_.end() ? Range{} : it->second;
}

QueryIndex::Range QueryIndex::subject_predicate_range(TermId s, TermId p) const {
  auto it = subject_predicate_ranges_.find((std::uint64_t{s} << 32) | p);
  return it == subject_predicate_ranges_.end() ? Range{} : it->second;
}

const std::vector<std::uint32_t>& QueryIndex::by_predicate(TermId p) const {
  static const std::vector<std::uint32_t> empty;
  auto it = predicate_lists_.find(p);
  return it == predicate_lists_.end() ? empty : it->second;
}

std::size_t BindingTable::count() const {
  if (!is_count || rows.size() != 1 || rows.front().size() != 1)
    throw UsageError("binding table is not a COUNT result");
  return static_cast<std::size_t>(std::stoull(rows.front().front().value()));
}

namespace {

using TermId = QueryIndex::TermId;
constexpr TermId unbound = QueryIndex::no_term;
// Marks a query constant that does not occur in the model.
constexpr TermId absent = QueryIndex::no_term - 1;

struct Slot {
  bool is_var = false;
  std::size_t var = 0;     // variable slot when is_var
  TermId constant = absent;
  const Term* term = nullptr;  // constant value, for filters
};

struct CompiledTriple {
  Slot s, p, o;
  std::uint64_t required = 0;
  std::uint64_t forbidden = 0;
};

struct CompiledFilter {
  Slot lhs, rhs;
  Comparison op;
};

struct CompiledGroup;

struct Check {
  std::variant<CompiledFilter, std::unique_ptr<CompiledGroup>> what;
};

struct CompiledGroup {
  std::vector<CompiledTriple> triples;
  /// checks[k] run after triples[k - 1] has bound its variables; checks[0]
  /// run before the first triple.
  std::vector<std::vector<Check>> checks;
};

class Compiler {
 public:
  Compiler(const QueryIndex& index) : index_(index) {}

  std::size_t var(const std::string& name) {
    auto [it, inserted] = vars_.try_emplace(name, vars_.size());
    return it->second;
  }
  std::size_t var_count() const { return vars_.size(); }

  Slot slot(const PatternTerm& t) {
    Slot s;
    if (auto v = std::get_if<Variable>(&t)) {
      s.is_var = true;
      s.var = var(v->name);
    } else {
      constants_.push_back(std::get<Term>(t));
      s.term = &constants_.back();
      const TermId id = index_.find(*s.term);
      s.constant = id == QueryIndex::no_term ? absent : id;
    }
    return s;
  }

  std::unique_ptr<CompiledGroup> group(const std::vector<Clause>& clauses, const std::set<std::size_t>& outer) {
    auto g = std::make_unique<CompiledGroup>();

    std::vector<const TriplePattern*> triples;
    for (const auto& c : clauses)
      if (auto t = std::get_if<TriplePattern>(&c)) triples.push_back(t);

    // Step at which each locally bound variable becomes bound.
    std::unordered_map<std::size_t, std::size_t> bound_at;
    for (std::size_t k = 0; k < triples.size(); ++k) {
      CompiledTriple ct;
      ct.s = slot(triples[k]->subject);
      ct.p = slot(triples[k]->predicate);
      ct.o = slot(triples[k]->object);
      for (const auto& oc : triples[k]->origins) {
        const std::size_t idx = index_.model().require_label(oc.label);
        (oc.required ? ct.required : ct.forbidden) |= std::uint64_t{1} << idx;
      }
      for (const Slot* sl : {&ct.s, &ct.p, &ct.o})
        if (sl->is_var && !outer.contains(sl->var)) bound_at.try_emplace(sl->var, k + 1);
      g->triples.push_back(ct);
    }
    g->checks.resize(triples.size() + 1);

    std::set<std::size_t> inner_scope = outer;
    for (const auto& [v, step] : bound_at) inner_scope.insert(v);

    auto schedule = [&](const std::set<std::size_t>& uses) {
      std::size_t step = 0;
      for (std::size_t v : uses)
        if (auto it = bound_at.find(v); it != bound_at.end()) step = std::max(step, it->second);
      return step;
    };

    for (const auto& c : clauses) {
      if (auto f = std::get_if<Filter>(&c)) {
        CompiledFilter cf{slot(f->lhs), slot(f->rhs), f->op};
        std::set<std::size_t> uses;
        for (const Slot* sl : {&cf.lhs, &cf.rhs}) {
          if (!sl->is_var) continue;
          if (!inner_scope.contains(sl->var))
            throw UsageError("FILTER variable is not bound by any triple pattern");
          uses.insert(sl->var);
        }
        g->checks[schedule(uses)].push_back(Check{cf});
      } else if (auto n = std::get_if<NotExists>(&c)) {
        std::set<std::size_t> uses;
        collect_vars(n->clauses, uses);
        auto sub = group(n->clauses, inner_scope);
        g->checks[schedule(uses)].push_back(Check{std::move(sub)});
      }
    }
    return g;
  }

 private:
  void collect_vars(const std::vector<Clause>& clauses, std::set<std::size_t>& out) {
    auto add = [&](const PatternTerm& t) {
      if (auto v = std::get_if<Variable>(&t)) out.insert(var(v->name));
    };
    for (const auto& c : clauses) {
      if (auto t = std::get_if<TriplePattern>(&c)) {
        add(t->subject);
        add(t->predicate);
        add(t->object);
      } else if (auto f = std::get_if<Filter>(&c)) {
        add(f->lhs);
        add(f->rhs);
      } else {
        collect_vars(std::get<NotExists>(c).clauses, out);
      }
    }
  }

  const QueryIndex& index_;
  std::unordered_map<std::string, std::size_t> vars_;
  std::deque<Term> constants_;
};

class Evaluator {
 public:
  Evaluator(const QueryIndex& index, std::size_t var_count) : index_(index), row_(var_count, unbound) {}

  /// Calls `on_solution` for each solution of `g`; stops early when it
  /// returns false. Returns false if stopped.
  bool solve(const CompiledGroup& g, const std::function<bool(const std::vector<TermId>&)>& on_solution) {
    return step(g, 0, on_solution);
  }

 private:
  bool step(const CompiledGroup& g, std::size_t k,
            const std::function<bool(const std::vector<TermId>&)>& on_solution) {
    for (const auto& check : g.checks[k])
      if (!passes(check)) return true;
    if (k == g.triples.size()) return on_solution(row_);

    const CompiledTriple& t = g.triples[k];
    const TermId s = value(t.s), p = value(t.p), o = value(t.o);
    if (s == absent || p == absent || o == absent) return true;

    auto try_entry = [&](std::uint32_t i) {
      const auto& e = index_.entries()[i];
      const std::uint64_t bits = e.origins.bits();
      if ((bits & t.required) != t.required || (bits & t.forbidden) != 0) return true;
      std::size_t newly[3];
      std::size_t n = 0;
      auto unify = [&](const Slot& sl, TermId have) {
        if (!sl.is_var) return sl.constant == have;
        TermId& cur = row_[sl.var];
        if (cur == unbound) {
          cur = have;
          newly[n++] = sl.var;
          return true;
        }
        return cur == have;
      };
      bool ok = unify(t.s, e.subject) && unify(t.p, e.predicate) && unify(t.o, e.object);
      bool keep_going = true;
      if (ok) keep_going = step(g, k + 1, on_solution);
      for (std::size_t j = 0; j < n; ++j) row_[newly[j]] = unbound;
      return keep_going;
    };

    if (s != unbound && p != unbound) {
      const auto r = index_.subject_predicate_range(s, p);
      for (std::uint32_t i = r.begin; i < r.end; ++i)
        if (!try_entry(i)) return false;
    } else if (s != unbound) {
      const auto r = index_.subject_range(s);
      for (std::uint32_t i = r.begin; i < r.end; ++i)
        if (!try_entry(i)) return false;
    } else if (p != unbound) {
      for (std::uint32_t i : index_.by_predicate(p))
        if (!try_entry(i)) return false;
    } else {
      for (std::uint32_t i = 0; i < index_.entries().size(); ++i)
        if (!try_entry(i)) return false;
    }
    return true;
  }

  TermId value(const Slot& sl) const { return sl.is_var ? row_[sl.var] : sl.constant; }

  const Term& term_of(const Slot& sl) const {
    return sl.is_var ? index_.term(row_[sl.var]) : *sl.term;
  }

  bool passes(const Check& check) {
    if (auto f = std::get_if<CompiledFilter>(&check.what)) {
      const Term& a = term_of(f->lhs);
      const Term& b = term_of(f->rhs);
      switch (f->op) {
        case Comparison::eq: return a == b;
        case Comparison::ne: return a != b;
        case Comparison::lt: return a < b;
        case Comparison::le: return a <= b;
        case Comparison::gt: return a > b;
        case Comparison::ge: return a >= b;
      }
      return false;
    }
    const auto& sub = *std::get<std::unique_ptr<CompiledGroup>>(check.what);
    bool found = false;
    step(sub, 0, [&](const std::vector<TermId>&) {
      found = true;
      return false;
    });
    return !found;
  }

  const QueryIndex& index_;
  std::vector<TermId> row_;
};

}  // namespace

BindingTable evaluate(const QueryIndex& index, const Query& q) {
  Compiler compiler(index);
  std::vector<std::size_t> projection;
  for (const auto& name : q.projection) projection.push_back(compiler.var(name));
  auto root = compiler.group(q.where, {});
  {
    std::set<std::size_t> top;
    for (const auto& c : q.where)
      if (auto t = std::get_if<TriplePattern>(&c))
        for (const PatternTerm* pt : {&t->subject, &t->predicate, &t->object})
          if (auto v = std::get_if<Variable>(pt)) top.insert(compiler.var(v->name));
    for (std::size_t i = 0; i < projection.size(); ++i)
      if (!top.contains(projection[i]))
        throw UsageError("projected variable ?" + q.projection[i] + " is not bound by any triple pattern");
  }

  std::vector<std::vector<TermId>> raw;
  Evaluator ev(index, compiler.var_count());
  ev.solve(*root, [&](const std::vector<TermId>& row) {
    std::vector<TermId> projected;
    projected.reserve(projection.size());
    for (std::size_t v : projection) projected.push_back(row[v]);
    raw.push_back(std::move(projected));
    return true;
  });

  BindingTable table;
  if (q.count) {
    std::size_t n = raw.size();
    if (q.count_distinct) {
      std::sort(raw.begin(), raw.end());
      n = static_cast<std::size_t>(std::unique(raw.begin(), raw.end()) - raw.begin());
    }
    table.columns = {"count"};
    table.rows = {{Term::literal(std::to_string(n))}};
    table.is_count = true;
    return table;
  }

  if (q.distinct) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  }

  // Order rows by the serialized form of their terms.
  std::unordered_map<TermId, std::string> text;
  for (const auto& row : raw)
    for (TermId id : row) text.try_emplace(id, index.term(id).to_string());
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = raw[x];
    const auto& b = raw[y];
    for (std::size_t c = 0; c < a.size(); ++c) {
      if (a[c] == b[c]) continue;
      return text[a[c]] < text[b[c]];
    }
    return false;
  });

  table.columns = q.projection;
  table.rows.reserve(raw.size());
  for (std::size_t i : order) {
    std::vector<Term> row;
    row.reserve(raw[i].size());
    for (TermId id : raw[i]) row.push_back(index.term(id));
    table.rows.push_back(std::move(row));
  }
  return table;
}

BindingTable evaluate(const ComparisonModel& model, const Query& q) {
  const QueryIndex index(model);
  return evaluate(index, q);
}

}  // namespace modeldelta
