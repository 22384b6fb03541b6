#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace drivebrake {

// Shortest round-trip decimal form; identical across runs on one platform.
std::string format_double(double x);
std::string format_optional(const std::optional<double>& x, std::string_view missing = "");

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace drivebrake
