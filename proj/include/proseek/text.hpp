#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. All "character" counts in proseek are Unicode code points.
// Invalid byte sequences decode as one code point per byte (Latin-1 fallback)
// so every input has a well-defined length.
namespace proseek::text {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

std::size_t length(std::string_view utf8);

// First `max_chars` code points of `utf8`, never splitting a sequence.
std::string head(std::string_view utf8, std::size_t max_chars);

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace proseek::text
