#pragma once

// Small string helpers shared by the parsers. Not part of the public headers.

#include <string>
#include <string_view>
#include <vector>

namespace halcor::text {

std::string_view trim(std::string_view s) noexcept;
std::string_view trim_right(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
bool is_word_char(char c) noexcept;
bool starts_with_ci(std::string_view s, std::string_view prefix) noexcept;
bool contains_ci(std::string_view haystack, std::string_view needle);
// Whole-word (ASCII letter/digit boundaries) case-insensitive search.
bool contains_word_ci(std::string_view haystack, std::string_view word);
// Lowercased alphanumeric tokens, in order.
std::vector<std::string> words(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string sha256_hex(std::string_view data);

}  // namespace halcor::text
