#pragma once

#include <string>

namespace sae::io {

std::string read_file(const std::string& path);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace sae::io
