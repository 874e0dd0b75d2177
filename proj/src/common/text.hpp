#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace foamagent::text {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);

/// Splits on '\n'; a trailing newline does not produce an empty last element.
std::vector<std::string_view> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Newline-delimited segments; a trailing newline does not add a line.
std::size_t count_lines(std::string_view s);

/// Last `n` lines of `s` (all of it when it has fewer).
std::string tail_lines(std::string_view s, std::size_t n);

/// ['a', 'b'] rendering used by the tutorial database and the prompts.
std::string python_list(const std::vector<std::string>& items);

bool is_valid_utf8(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace foamagent::text
