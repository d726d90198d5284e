#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace argrel {

/// Writes `bytes` to a sibling temp file and renames it over `path`; readers
/// see either the old file or the complete new one. Creates parent dirs.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace argrel
