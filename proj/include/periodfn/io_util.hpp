#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace periodfn {

// 17 significant digits; parses back to the same double.
std::string format_double(double v);

// Writes to a temporary sibling then renames over `path`. Throws Error(Io).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace periodfn
