#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace modeldelta {

/// Whole-file binary read; throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Whole-file binary write, creating parent directories; throws IoError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace modeldelta
