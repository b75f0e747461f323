#pragma once

#include <string>
#include <string_view>

namespace tweetfunnel::detail {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes one UTF-8 sequence at s[i] and advances i. Malformed input yields
// U+FFFD and consumes a single byte.
inline char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++i;
    return kReplacementChar;
  }
  if (i + len > s.size()) {
    ++i;
    return kReplacementChar;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kReplacementChar;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++i;
    return kReplacementChar;
  }
  i += len;
  return cp;
}

// True when s[start, end) is exactly the encoding of cp (i.e. the decoder did
// not substitute U+FFFD for garbage).
inline bool decoded_verbatim(std::string_view s, std::size_t start, std::size_t end, char32_t cp) {
  return cp != kReplacementChar || s.substr(start, end - start) == "\xEF\xBF\xBD";
}

// Code points XML 1.0 forbids even as character references.
inline bool is_xml_illegal(char32_t cp) noexcept {
  return (cp < 0x20 && cp != 0x09 && cp != 0x0A && cp != 0x0D) || cp == 0xFFFE || cp == 0xFFFF;
}

}  // namespace tweetfunnel::detail
