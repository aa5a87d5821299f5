#include "embedlab/text.hpp"

#include <algorithm>
#include <iterator>

namespace embedlab {

#include "unicode_tables.inc"

bool decode_utf8(std::string_view s, std::size_t& pos, char32_t& cp) {
  if (pos >= s.size()) return false;
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned char b0 = byte(pos);
  std::size_t len = 0;
  char32_t v = 0;
  if (b0 < 0x80) {
    cp = b0;
    ++pos;
    return true;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    v = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    v = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    v = b0 & 0x07;
  } else {
    return false;
  }
  if (pos + len > s.size()) return false;
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return false;
    v = (v << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (v < kMinByLen[len]) return false;             // overlong
  if (v >= 0xD800 && v <= 0xDFFF) return false;     // surrogate
  if (v > 0x10FFFF) return false;
  cp = v;
  pos += len;
  return true;
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

std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t pos = 0;
  char32_t cp = 0;
  while (pos < s.size()) {
    if (!decode_utf8(s, pos, cp)) return pos;
  }
  return std::string_view::npos;
}

bool is_alphabetic(char32_t cp) {
  const auto* first = std::begin(tables::kAlphaRanges);
  const auto* last = std::end(tables::kAlphaRanges);
  const auto* it = std::upper_bound(
      first, last, cp,
      [](char32_t v, const tables::CpRange& r) { return v < r.first; });
  if (it == first) return false;
  --it;
  return cp <= it->last;
}

char32_t to_lower(char32_t cp) {
  const auto* first = std::begin(tables::kLowerRuns);
  const auto* last = std::end(tables::kLowerRuns);
  const auto* it = std::upper_bound(
      first, last, cp,
      [](char32_t v, const tables::LowerRun& r) { return v < r.first; });
  if (it == first) return cp;
  --it;
  if (cp > it->last) return cp;
  if ((cp - it->first) % it->stride != 0) return cp;
  return static_cast<char32_t>(static_cast<std::int64_t>(cp) + it->delta);
}

}  // namespace embedlab
