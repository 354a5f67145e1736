#include "postedit/unicode.hpp"

#include <string>

#include "postedit/error.hpp"

namespace postedit {

namespace {

bool is_continuation(unsigned char c) noexcept { return (c & 0xC0) == 0x80; }

}  // namespace

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if (c >= 0xC2 && c <= 0xDF) {
      extra = 1;
      cp = c & 0x1F;
    } else if (c >= 0xE0 && c <= 0xEF) {
      extra = 2;
      cp = c & 0x0F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if (!is_continuation(cc)) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Reject overlong forms, surrogates and values past U+10FFFF.
    if ((extra == 2 && cp < 0x800) || (extra == 3 && (cp < 0x10000 || cp > 0x10FFFF))) {
      return false;
    }
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    i += extra + 1;
  }
  return true;
}

std::size_t code_point_length(std::string_view text) noexcept {
  std::size_t count = 0;
  for (const char ch : text) {
    if (!is_continuation(static_cast<unsigned char>(ch))) ++count;
  }
  return count;
}

std::size_t byte_offset(std::string_view text, std::size_t cp_index) {
  std::size_t cp = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_continuation(static_cast<unsigned char>(text[i]))) continue;
    if (cp == cp_index) return i;
    ++cp;
  }
  if (cp == cp_index) return text.size();
  throw BoundsError(cp_index, cp, "code point index out of bounds");
}

std::string extract_span_text(std::string_view text, const CharRange& range) {
  const std::size_t len = code_point_length(text);
  if (range.start > len) throw BoundsError(range.start, len, "range start out of bounds");
  if (range.end > len) throw BoundsError(range.end, len, "range end out of bounds");
  if (range.end < range.start) throw BoundsError(range.end, len, "range end precedes start");
  const std::size_t b0 = byte_offset(text, range.start);
  const std::size_t b1 = byte_offset(text, range.end);
  return std::string(text.substr(b0, b1 - b0));
}

std::optional<std::size_t> find_code_points(std::string_view haystack, std::string_view needle,
                                            std::size_t from_cp) {
  const std::size_t len = code_point_length(haystack);
  if (from_cp > len) return std::nullopt;
  const std::size_t from_byte = byte_offset(haystack, from_cp);
  // Byte search is safe: a valid UTF-8 needle can only match at a code point
  // boundary of a valid UTF-8 haystack.
  const std::size_t hit = haystack.find(needle, from_byte);
  if (hit == std::string_view::npos) return std::nullopt;
  return code_point_length(haystack.substr(0, hit));
}

std::string splice_text(std::string_view text, const CharRange& range,
                        std::string_view replacement) {
  const std::size_t len = code_point_length(text);
  if (range.start > len) throw BoundsError(range.start, len, "splice start out of bounds");
  if (range.end > len) throw BoundsError(range.end, len, "splice end out of bounds");
  if (range.end < range.start) throw BoundsError(range.end, len, "splice end precedes start");
  const std::size_t b0 = byte_offset(text, range.start);
  const std::size_t b1 = byte_offset(text, range.end);
  std::string out;
  out.reserve(text.size() - (b1 - b0) + replacement.size());
  out.append(text.substr(0, b0));
  out.append(replacement);
  out.append(text.substr(b1));
  return out;
}

bool is_unicode_whitespace(char32_t cp) noexcept {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t decode_next(std::string_view text, std::size_t& pos) noexcept {
  const auto c = static_cast<unsigned char>(text[pos]);
  std::size_t extra = 0;
  char32_t cp = c;
  if (c >= 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else if (c >= 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if (c >= 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  }
  ++pos;
  for (std::size_t k = 0; k < extra && pos < text.size(); ++k, ++pos) {
    cp = (cp << 6) | (static_cast<unsigned char>(text[pos]) & 0x3F);
  }
  return cp;
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

}  // namespace postedit
