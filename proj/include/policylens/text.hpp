#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace policylens {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Runs of ASCII whitespace become one space; result is trimmed.
std::string collapse_whitespace(std::string_view s);

/// Whitespace-delimited token count.
std::size_t count_words(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);

/// Case-insensitive, whitespace-normalized key used to compare questions.
std::string question_key(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// FNV-1a, 64 bit. Used for prompt keys and policy content hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

} // namespace policylens
