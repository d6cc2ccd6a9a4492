#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lsalign::uni {

/// True if the code point has Unicode general category Lu, Ll, Lt, Lm or Lo.
bool is_letter(char32_t cp);

/// True if the code point has Unicode general category Nd.
bool is_digit(char32_t cp);

/// Single-code-point lowercase mapping; identity where none is defined.
char32_t to_lower(char32_t cp);

/// True if the byte string is well-formed UTF-8 (rejects overlong forms,
/// surrogates and out-of-range code points).
bool is_valid_utf8(std::string_view s);

/// Decodes UTF-8 to code points. Throws std::runtime_error on malformed input.
std::u32string decode_utf8(std::string_view s);

/// Lenient decode: each malformed byte becomes `replacement`.
std::u32string decode_utf8_lossy(std::string_view s, char32_t replacement = 0xFFFD);

void append_utf8(std::string& out, char32_t cp);

std::string encode_utf8(const std::u32string& cps);

/// Lowercases a UTF-8 string code point by code point.
std::string lower_utf8(std::string_view s);

}  // namespace lsalign::uni
