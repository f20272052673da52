#pragma once

// Origin-tagged comparison of two or more labeled model graphs.
//
// Every statement of every input appears exactly once, tagged with the set of
// inputs it came from. The comparison serializes to .ntc:
//
//   #labels: base,left,right
//   <e:a> <a:Name> "Design" @ base,left
//
// The header line is optional on input; without it the labels are the
// bytewise-sorted union of the labels used by the entries.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modeldelta/triples.hpp"

namespace modeldelta {

/// Set of input positions, stored as a bitmask over ComparisonModel::labels().
class OriginSet {
 public:
  static constexpr std::size_t max_labels = 64;

  constexpr OriginSet() = default;
  constexpr explicit OriginSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr OriginSet single(std::size_t index) { return OriginSet(std::uint64_t{1} << index); }

  constexpr bool contains(std::size_t index) const { return (bits_ >> index) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint64_t bits() const { return bits_; }
  std::size_t size() const;

  constexpr OriginSet& operator|=(OriginSet other) {
    bits_ |= other.bits_;
    return *this;
  }

  friend constexpr bool operator==(OriginSet, OriginSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

struct LabeledGraph {
  std::string label;
  ModelGraph graph;
};

class ComparisonModel {
 public:
  struct Entry {
    Statement statement;
    OriginSet origins;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ComparisonModel() = default;

  /// Entries must be sorted canonically, unique, and carry non-empty origins
  /// within the label range. Used by builders and readers.
  ComparisonModel(std::vector<std::string> labels, std::vector<Entry> entries);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::size_t> label_index(std::string_view label) const;
  /// Throws UsageError for unknown labels.
  std::size_t require_label(std::string_view label) const;

  /// Origin labels of an entry, sorted bytewise.
  std::vector<std::string> origin_labels(OriginSet origins) const;

  friend bool operator==(const ComparisonModel&, const ComparisonModel&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Entry> entries_;
};

/// Labels must be distinct, non-empty and drawn from [A-Za-z0-9_.-].
bool valid_label(std::string_view label) noexcept;

/// Union of the inputs with per-statement origin sets. Needs at least two
/// inputs with distinct valid labels (UsageError otherwise).
ComparisonModel build_comparison(std::span<const LabeledGraph> inputs);

/// Statements whose origin set contains `label`.
ModelGraph project_origin(const ComparisonModel& comparison, std::string_view label);

/// Reified export: entry k becomes x:stmtK with m:subject, m:predicate,
/// m:object and one m:inModel literal per origin label. K is zero-padded to
/// the digit count of the largest index.
ModelGraph export_reified(const ComparisonModel& comparison);

std::string serialize_comparison(const ComparisonModel& comparison);
ComparisonModel parse_comparison(std::string_view text);

}  // namespace modeldelta
