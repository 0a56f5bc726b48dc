#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace votkit {

/// Lines without terminators; a trailing newline does not produce an empty last line.
std::vector<std::string> read_lines(const std::filesystem::path& file);
std::string read_file(const std::filesystem::path& file);

/// Write to a sibling temporary, then rename over `file`.
void write_file_atomic(const std::filesystem::path& file, std::string_view contents);

std::string trim(std::string_view s);
std::string strip_comment(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);

/// Strict numeric parsing; `where` prefixes the error message.
double parse_double(std::string_view s, const std::string& where);
std::int64_t parse_int(std::string_view s, const std::string& where);

std::string csv_escape(std::string_view field);

}  // namespace votkit
