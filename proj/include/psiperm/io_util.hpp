#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace psiperm {

// Writes to a sibling temporary file, then renames it over path.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_field(std::string_view text);

}  // namespace psiperm
