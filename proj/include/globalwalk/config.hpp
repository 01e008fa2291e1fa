#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace globalwalk {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat "key=value" text, one pair per line; '#' comments and blank lines
/// are skipped, surrounding whitespace trimmed.
KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::string& path);

double parse_real(std::string_view key, std::string_view value);
std::uint64_t parse_unsigned(std::string_view key, std::string_view value);
bool parse_flag(std::string_view key, std::string_view value);
std::vector<std::string> split_list(std::string_view value, char sep = ',');

/// Shortest decimal text that parses back to the same double.
std::string format_real(double x);

}  // namespace globalwalk
