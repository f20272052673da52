#pragma once

// Plain-text table and CSV helpers shared by the report renderers.

#include <string>
#include <vector>

namespace modeldelta::detail {

/// Columns padded to their widest cell and separated by two spaces; a dashed
/// rule follows the header. Columns flagged in `right_align` are right-aligned.
/// Trailing spaces are trimmed from every line.
std::string aligned_table(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows,
                          const std::vector<bool>& right_align);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

/// Display width in code points (UTF-8 continuation bytes are not counted).
std::size_t display_width(const std::string& s);

}  // namespace modeldelta::detail
