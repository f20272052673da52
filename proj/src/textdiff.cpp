#include "modeldelta/textdiff.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace modeldelta {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

/// Suffix LCS lengths S(i, j) = |lcs(a[i..], b[j..])| for i < n, stored as one
/// bit per cell: bit j of row i is S(i, j) - S(i, j + 1). Per-word suffix
/// popcounts make lookups O(1).
class SuffixTable {
 public:
  SuffixTable(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b)
      : rows_(a.size()), cols_(b.size()), words_((b.size() + 63) / 64) {
    bits_.assign(rows_ * words_, 0);
    counts_.assign(rows_ * (words_ + 1), 0);
    std::vector<std::uint32_t> next(cols_ + 1, 0), cur(cols_ + 1, 0);
    for (std::size_t i = rows_; i-- > 0;) {
      cur[cols_] = 0;
      for (std::size_t j = cols_; j-- > 0;) {
        cur[j] = a[i] == b[j] ? next[j + 1] + 1 : std::max(next[j], cur[j + 1]);
        if (cur[j] != cur[j + 1]) bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
      }
      std::uint32_t* counts = &counts_[i * (words_ + 1)];
      for (std::size_t w = words_; w-- > 0;)
        counts[w] = counts[w + 1] + static_cast<std::uint32_t>(std::popcount(bits_[i * words_ + w]));
      std::swap(next, cur);
    }
  }

  std::uint32_t at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) return 0;
    const std::size_t w = j / 64;
    const std::uint64_t word = bits_[i * words_ + w] >> (j % 64);
    return static_cast<std::uint32_t>(std::popcount(word)) + counts_[i * (words_ + 1) + w + 1];
  }

 private:
  std::size_t rows_, cols_, words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> counts_;
};

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

void append_hunk(std::vector<DiffHunk>& hunks, DiffOp op, std::span<const std::string> tokens,
                 std::size_t a_start, std::size_t b_start) {
  if (tokens.empty()) return;
  if (!hunks.empty() && hunks.back().op == op) {
    hunks.back().tokens.insert(hunks.back().tokens.end(), tokens.begin(), tokens.end());
    return;
  }
  hunks.push_back({op, std::vector<std::string>(tokens.begin(), tokens.end()), a_start, b_start});
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, TokenMode mode) {
  std::vector<std::string> out;
  if (mode == TokenMode::word) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && is_space(text[i])) ++i;
      const std::size_t start = i;
      while (i < text.size() && !is_space(text[i])) ++i;
      if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
  }
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    std::erase(line, '\r');
    out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

std::vector<Match> lcs_matches(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_map<std::string_view, std::uint32_t> ids;
  auto intern = [&](std::span<const std::string> seq) {
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (const auto& t : seq)
      out.push_back(ids.try_emplace(t, static_cast<std::uint32_t>(ids.size())).first->second);
    return out;
  };
  const auto ia = intern(a);
  const auto ib = intern(b);

  // Common prefixes are always part of the preferred solution.
  std::size_t prefix = 0;
  while (prefix < ia.size() && prefix < ib.size() && ia[prefix] == ib[prefix]) ++prefix;

  std::vector<Match> out;
  for (std::size_t k = 0; k < prefix; ++k) out.push_back({k, k});

  const std::span<const std::uint32_t> ra(ia.data() + prefix, ia.size() - prefix);
  const std::span<const std::uint32_t> rb(ib.data() + prefix, ib.size() - prefix);
  if (ra.empty() || rb.empty()) return out;

  const SuffixTable table(ra, rb);
  std::vector<std::vector<std::uint32_t>> positions(ids.size());
  for (std::size_t j = 0; j < rb.size(); ++j) positions[rb[j]].push_back(static_cast<std::uint32_t>(j));

  std::size_t i = 0, j = 0;
  std::uint32_t remaining = table.at(0, 0);
  while (remaining > 0) {
    for (;; ++i) {
      const auto& pos = positions[ra[i]];
      auto it = std::lower_bound(pos.begin(), pos.end(), static_cast<std::uint32_t>(j));
      if (it == pos.end()) continue;
      if (table.at(i + 1, *it + 1) + 1 == remaining) {
        j = *it;
        break;
      }
    }
    out.push_back({prefix + i, prefix + j});
    ++i;
    ++j;
    --remaining;
  }
  return out;
}

std::vector<std::string> lcs(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::string> out;
  for (const auto& m : lcs_matches(a, b)) out.push_back(a[m.a]);
  return out;
}

std::vector<DiffHunk> diff_tokens(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<DiffHunk> hunks;
  std::size_t ai = 0, bi = 0;
  auto gap = [&](std::size_t a_end, std::size_t b_end) {
    append_hunk(hunks, DiffOp::remove, a.subspan(ai, a_end - ai), ai, bi);
    append_hunk(hunks, DiffOp::insert, b.subspan(bi, b_end - bi), a_end, bi);
    ai = a_end;
    bi = b_end;
  };
  for (const auto& m : lcs_matches(a, b)) {
    gap(m.a, m.b);
    append_hunk(hunks, DiffOp::equal, a.subspan(m.a, 1), m.a, m.b);
    ++ai;
    ++bi;
  }
  gap(a.size(), b.size());
  return hunks;
}

std::vector<DiffHunk> diff_text(std::string_view a, std::string_view b, TokenMode mode) {
  const auto ta = tokenize(a, mode);
  const auto tb = tokenize(b, mode);
  if (mode == TokenMode::line || ta.size() * tb.size() <= full_matrix_cell_limit)
    return diff_tokens(ta, tb);

  const auto la = tokenize(a, TokenMode::line);
  const auto lb = tokenize(b, TokenMode::line);
  auto words_of = [](std::span<const std::string> lines) {
    std::vector<std::string> out;
    for (const auto& l : lines) {
      auto w = tokenize(l, TokenMode::word);
      out.insert(out.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    return out;
  };

  std::vector<DiffHunk> hunks;
  std::size_t wa = 0, wb = 0;
  std::vector<std::string> removed, inserted;
  auto flush_block = [&] {
    if (removed.empty() && inserted.empty()) return;
    for (auto& h : diff_tokens(removed, inserted))
      append_hunk(hunks, h.op, h.tokens, wa + h.a_start, wb + h.b_start);
    wa += removed.size();
    wb += inserted.size();
    removed.clear();
    inserted.clear();
  };
  for (const auto& lh : diff_tokens(la, lb)) {
    auto words = words_of(lh.tokens);
    if (lh.op == DiffOp::equal) {
      flush_block();
      append_hunk(hunks, DiffOp::equal, words, wa, wb);
      wa += words.size();
      wb += words.size();
    } else {
      auto& dest = lh.op == DiffOp::remove ? removed : inserted;
      dest.insert(dest.end(), words.begin(), words.end());
    }
  }
  flush_block();
  return hunks;
}

std::string render_word_diff(std::span<const DiffHunk> hunks) {
  std::string out;
  for (const auto& h : hunks) {
    if (!out.empty()) out += ' ';
    switch (h.op) {
      case DiffOp::equal: out += join(h.tokens); break;
      case DiffOp::remove: out += "[-" + join(h.tokens) + "-]"; break;
      case DiffOp::insert: out += "{+" + join(h.tokens) + "+}"; break;
    }
  }
  return out;
}

std::string render_unified(std::span<const DiffHunk> hunks, std::string_view a_name,
                           std::string_view b_name) {
  struct Line {
    char tag;
    const std::string* text;
  };
  std::vector<Line> lines;
  for (const auto& h : hunks) {
    const char tag = h.op == DiffOp::equal ? ' ' : h.op == DiffOp::remove ? '-' : '+';
    for (const auto& t : h.tokens) lines.push_back({tag, &t});
  }
  constexpr std::size_t context = 3;

  std::string out;
  std::size_t idx = 0;
  // Line numbers (0-based) in a and b of lines[idx].
  std::size_t a_line = 0, b_line = 0;
  while (idx < lines.size()) {
    std::size_t first_change = idx;
    while (first_change < lines.size() && lines[first_change].tag == ' ') ++first_change;
    if (first_change == lines.size()) break;

    const std::size_t start = first_change > idx + context ? first_change - context : idx;
    for (std::size_t k = idx; k < start; ++k) {
      ++a_line;
      ++b_line;
    }
    // Extend while the next change is within 2 * context equal lines.
    std::size_t end = first_change;
    while (true) {
      while (end < lines.size() && lines[end].tag != ' ') ++end;
      std::size_t run = end;
      while (run < lines.size() && lines[run].tag == ' ') ++run;
      if (run < lines.size() && run - end <= 2 * context) {
        end = run;
        continue;
      }
      end = std::min(end + context, run);
      break;
    }

    std::size_t a_len = 0, b_len = 0;
    for (std::size_t k = start; k < end; ++k) {
      if (lines[k].tag != '+') ++a_len;
      if (lines[k].tag != '-') ++b_len;
    }
    if (out.empty()) {
      out += "--- " + std::string(a_name) + "\n";
      out += "+++ " + std::string(b_name) + "\n";
    }
    auto range = [](std::size_t first, std::size_t len) {
      std::string r = std::to_string(len == 0 ? first : first + 1);
      if (len != 1) r += "," + std::to_string(len);
      return r;
    };
    out += "@@ -" + range(a_line, a_len) + " +" + range(b_line, b_len) + " @@\n";
    for (std::size_t k = start; k < end; ++k) {
      out += lines[k].tag;
      out += *lines[k].text;
      out += '\n';
    }
    a_line += a_len;
    b_line += b_len;
    idx = end;
  }
  return out;
}

}  // namespace modeldelta
