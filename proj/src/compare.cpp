#include "modeldelta/compare.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "modeldelta/error.hpp"
#include "modeldelta/vocab.hpp"

namespace modeldelta {

namespace {

constexpr std::string_view labels_header = "#labels: ";

std::vector<std::string> split_labels(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    out.emplace_back(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::size_t OriginSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool valid_label(std::string_view label) noexcept {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '-';
  });
}

ComparisonModel::ComparisonModel(std::vector<std::string> labels, std::vector<Entry> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  if (labels_.size() > OriginSet::max_labels)
    throw UsageError("at most " + std::to_string(OriginSet::max_labels) + " models can be compared");
  const std::uint64_t allowed =
      labels_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << labels_.size()) - 1;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.origins.empty() || (e.origins.bits() & ~allowed) != 0)
      throw ValidationError("entry with invalid origin set: " + e.statement.to_string());
    if (i > 0 && !(entries_[i - 1].statement < e.statement))
      throw ValidationError("comparison entries out of order or duplicated at " +
                            e.statement.to_string());
  }
}

std::optional<std::size_t> ComparisonModel::label_index(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t ComparisonModel::require_label(std::string_view label) const {
  if (auto idx = label_index(label)) return *idx;
  throw UsageError("unknown model label '" + std::string(label) + "'");
}

std::vector<std::string> ComparisonModel::origin_labels(OriginSet origins) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (origins.contains(i)) out.push_back(labels_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

ComparisonModel build_comparison(std::span<const LabeledGraph> inputs) {
  if (inputs.size() < 2) throw UsageError("a comparison needs at least two models");
  if (inputs.size() > OriginSet::max_labels)
    throw UsageError("at most " + std::to_string(OriginSet::max_labels) + " models can be compared");

  std::vector<std::string> labels;
  std::set<std::string_view> seen;
  for (const auto& in : inputs) {
    if (!valid_label(in.label)) throw UsageError("invalid model label '" + in.label + "'");
    if (!seen.insert(in.label).second) throw UsageError("duplicate model label '" + in.label + "'");
    labels.push_back(in.label);
  }

  std::size_t total = 0;
  for (const auto& in : inputs) total += in.graph.size();

  std::vector<ComparisonModel::Entry> tagged;
  tagged.reserve(total);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (const auto& s : inputs[i].graph) tagged.push_back({s, OriginSet::single(i)});

  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) { return a.statement < b.statement; });

  std::vector<ComparisonModel::Entry> merged;
  merged.reserve(tagged.size());
  for (auto& e : tagged) {
    if (!merged.empty() && merged.back().statement == e.statement) {
      merged.back().origins |= e.origins;
    } else {
      merged.push_back(std::move(e));
    }
  }
  return ComparisonModel(std::move(labels), std::move(merged));
}

ModelGraph project_origin(const ComparisonModel& comparison, std::string_view label) {
  const std::size_t idx = comparison.require_label(label);
  std::vector<Statement> out;
  for (const auto& e : comparison.entries())
    if (e.origins.contains(idx)) out.push_back(e.statement);
  return ModelGraph(std::move(out), std::string(label));
}

ModelGraph export_reified(const ComparisonModel& comparison) {
  const std::size_t n = comparison.size();
  const std::size_t width = std::to_string(n == 0 ? 0 : n - 1).size();

  const Term subject = Term::iri(std::string(vocab::subject));
  const Term predicate = Term::iri(std::string(vocab::predicate));
  const Term object = Term::iri(std::string(vocab::object));
  const Term in_model = Term::iri(std::string(vocab::in_model));

  std::vector<Statement> out;
  out.reserve(n * 5);
  std::size_t k = 0;
  for (const auto& e : comparison.entries()) {
    std::string index = std::to_string(k++);
    index.insert(0, width - index.size(), '0');
    const Term node = Term::iri(std::string(vocab::reified_prefix) + index);
    out.push_back({node, subject, e.statement.subject});
    out.push_back({node, predicate, e.statement.predicate});
    out.push_back({node, object, e.statement.object});
    for (auto& label : comparison.origin_labels(e.origins))
      out.push_back({node, in_model, Term::literal(std::move(label))});
  }
  return ModelGraph(std::move(out));
}

std::string serialize_comparison(const ComparisonModel& comparison) {
  std::string out(labels_header);
  for (std::size_t i = 0; i < comparison.labels().size(); ++i) {
    if (i > 0) out += ',';
    out += comparison.labels()[i];
  }
  out += '\n';
  for (const auto& e : comparison.entries()) {
    out += e.statement.to_string();
    out += " @ ";
    const auto labels = comparison.origin_labels(e.origins);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i > 0) out += ',';
      out += labels[i];
    }
    out += '\n';
  }
  return out;
}

ComparisonModel parse_comparison(std::string_view text) {
  std::vector<std::string> header;
  bool have_header = false;
  struct RawEntry {
    Statement statement;
    std::vector<std::string> labels;
    std::size_t line_no;
  };
  std::vector<RawEntry> raw;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (line_no == 1 && line.starts_with(labels_header)) {
      header = split_labels(line.substr(labels_header.size()));
      for (const auto& l : header)
        if (!valid_label(l)) throw ParseError("invalid label '" + l + "' in header", line_no);
      have_header = true;
      continue;
    }

    detail::LineReader reader{line, line_no, 0};
    Statement s = detail::read_statement(reader);
    if (line.substr(reader.pos, 3) != " @ ") reader.fail("expected ' @ ' before origin labels");
    reader.pos += 3;
    auto labels = split_labels(line.substr(reader.pos));
    for (const auto& l : labels)
      if (!valid_label(l)) reader.fail("invalid origin label '" + l + "'");
    raw.push_back({std::move(s), std::move(labels), line_no});
  }

  if (!have_header) {
    std::set<std::string> all;
    for (const auto& r : raw) all.insert(r.labels.begin(), r.labels.end());
    header.assign(all.begin(), all.end());
  }
  std::set<std::string_view> distinct(header.begin(), header.end());
  if (distinct.size() != header.size()) throw ParseError("duplicate label in header", 1);
  if (header.size() > OriginSet::max_labels)
    throw ParseError("too many labels", 1);

  std::vector<ComparisonModel::Entry> entries;
  entries.reserve(raw.size());
  for (auto& r : raw) {
    OriginSet origins;
    for (const auto& l : r.labels) {
      auto it = std::find(header.begin(), header.end(), l);
      if (it == header.end())
        throw ParseError("origin label '" + l + "' not declared in header", r.line_no);
      origins |= OriginSet::single(static_cast<std::size_t>(it - header.begin()));
    }
    entries.push_back({std::move(r.statement), origins});
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.statement < b.statement; });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i - 1].statement == entries[i].statement)
      throw ParseError("duplicate statement " + entries[i].statement.to_string(), 0);
  return ComparisonModel(std::move(header), std::move(entries));
}

}  // namespace modeldelta
