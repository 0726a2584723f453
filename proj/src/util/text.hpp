#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ttl::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_ci(std::string_view s, std::string_view prefix);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from,
                        std::string_view to);

// Collapses runs of whitespace to a single space and trims.
std::string squash_spaces(std::string_view s);

// Substitutes {name} placeholders. Throws Error(kInvalidArgument) when the
// template references a name missing from `values`.
std::string render(std::string_view tpl,
                   const std::map<std::string, std::string>& values);

// Fixed-point formatting, e.g. format_fixed(0.15625, 4) == "0.1563".
std::string format_fixed(double value, int digits);

// Shortest text that parses back to the same double.
std::string format_exact(double value);

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ttl::text
