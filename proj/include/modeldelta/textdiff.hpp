#pragma once

// LCS-based diffing of text attribute values at line or word granularity.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modeldelta {

enum class TokenMode { line, word };

/// Line mode splits on LF and strips CR; word mode splits on runs of
/// whitespace. Empty text yields no tokens.
std::vector<std::string> tokenize(std::string_view text, TokenMode mode);

/// A matched pair of positions, one in each input.
struct Match {
  std::size_t a;
  std::size_t b;
  friend bool operator==(const Match&, const Match&) = default;
};

/// Positions of a longest common subsequence. Among all maximal solutions the
/// one whose positions in `a` are lexicographically smallest is returned, with
/// each `b` position as small as possible.
std::vector<Match> lcs_matches(std::span<const std::string> a, std::span<const std::string> b);

std::vector<std::string> lcs(std::span<const std::string> a, std::span<const std::string> b);

enum class DiffOp { equal, insert, remove };

struct DiffHunk {
  DiffOp op;
  std::vector<std::string> tokens;
  std::size_t a_start;  ///< 0-based token offset into a
  std::size_t b_start;  ///< 0-based token offset into b

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

/// Hunks derived from lcs_matches. Within a gap, removals precede insertions;
/// adjacent hunks never share an op.
std::vector<DiffHunk> diff_tokens(std::span<const std::string> a, std::span<const std::string> b);

/// Word-level diffs whose token product exceeds this are computed line-first:
/// lines are aligned, then words are diffed inside each changed line block.
inline constexpr std::size_t full_matrix_cell_limit = 4'000'000;

std::vector<DiffHunk> diff_text(std::string_view a, std::string_view b, TokenMode mode);

/// `[-removed-]` and `{+inserted+}` markers, tokens joined by single spaces.
std::string render_word_diff(std::span<const DiffHunk> hunks);

/// Unified-style output with `---`/`+++` headers and 3 lines of context.
std::string render_unified(std::span<const DiffHunk> hunks, std::string_view a_name,
                           std::string_view b_name);

}  // namespace modeldelta
