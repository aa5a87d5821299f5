#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace embedlab {

// Strict UTF-8 decoder: rejects overlong forms, surrogates and code points
// above U+10FFFF. On success writes the code point and advances `pos`;
// on failure returns false and leaves `pos` untouched.
bool decode_utf8(std::string_view s, std::size_t& pos, char32_t& cp);

void append_utf8(std::string& out, char32_t cp);

// Byte offset of the first invalid UTF-8 sequence, or npos when none.
std::size_t find_invalid_utf8(std::string_view s);

// Unicode letter test and simple (single code point) lowercase mapping,
// backed by tables generated from the Unicode character database.
bool is_alphabetic(char32_t cp);
char32_t to_lower(char32_t cp);

}  // namespace embedlab
