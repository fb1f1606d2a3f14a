#pragma once

#include <filesystem>
#include <string>

namespace aqo {

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename, so readers never observe
/// a partially written file.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Formats with `digits` significant digits ("%.*g").
std::string format_number(double value, int digits = 9);

}  // namespace aqo
