#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mgsim {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

std::string_view trim(std::string_view s);

// Splits one CSV line on ','. Fields are not unquoted (the formats here
// never contain quoted fields).
std::vector<std::string_view> split_csv(std::string_view line);

// Strict double parse of a whole (trimmed) field. Returns false if the
// field is empty, has trailing junk, or is not a number.
bool parse_double(std::string_view field, double& out);

std::string read_text_file(const std::string& path);  // throws IoError
void write_text_file(const std::string& path, std::string_view content);  // throws IoError

} // namespace mgsim
