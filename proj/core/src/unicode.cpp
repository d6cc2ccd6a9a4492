#include "lsalign/unicode.hpp"

#include <algorithm>
#include <stdexcept>

#include "unicode_tables.hpp"

namespace lsalign::uni {

namespace {

bool in_ranges(const detail::CodepointRange* ranges, std::size_t n, char32_t cp) {
  const auto* end = ranges + n;
  // First range whose last bound is >= cp.
  const auto* it = std::lower_bound(
      ranges, end, cp,
      [](const detail::CodepointRange& r, char32_t c) { return r.last < c; });
  return it != end && it->first <= cp;
}

// Decodes one code point starting at s[i]. Returns false on malformed input
// and leaves i on the offending byte.
bool decode_one(std::string_view s, std::size_t& i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  }
  int len;
  char32_t min_cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min_cp = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min_cp = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min_cp = 0x10000;
  } else {
    return false;
  }
  if (i + static_cast<std::size_t>(len) > s.size()) return false;
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((b & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
  i += static_cast<std::size_t>(len);
  return true;
}

}  // namespace

bool is_letter(char32_t cp) {
  return in_ranges(detail::kLetterRanges, detail::kLetterRanges_size, cp);
}

bool is_digit(char32_t cp) {
  return in_ranges(detail::kDigitRanges, detail::kDigitRanges_size, cp);
}

char32_t to_lower(char32_t cp) {
  const auto* end = detail::kLowerMappings + detail::kLowerMappings_size;
  const auto* it = std::lower_bound(
      detail::kLowerMappings, end, cp,
      [](const detail::LowerMapping& m, char32_t c) { return m.from < c; });
  if (it != end && it->from == cp) return it->to;
  return cp;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (!decode_one(s, i, cp)) return false;
  }
  return true;
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (!decode_one(s, i, cp)) {
      throw std::runtime_error("malformed UTF-8 at byte offset " + std::to_string(i));
    }
    out.push_back(cp);
  }
  return out;
}

std::u32string decode_utf8_lossy(std::string_view s, char32_t replacement) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (decode_one(s, i, cp)) {
      out.push_back(cp);
    } else {
      out.push_back(replacement);
      ++i;
    }
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

std::string lower_utf8(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size()) {
    if (!decode_one(s, i, cp)) {
      // Callers validate their inputs; pass unrecognized bytes through.
      out.push_back(s[i]);
      ++i;
      continue;
    }
    append_utf8(out, to_lower(cp));
  }
  return out;
}

}  // namespace lsalign::uni
