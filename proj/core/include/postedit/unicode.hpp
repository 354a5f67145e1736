#pragma once

// Code-point arithmetic over UTF-8 text. Every span index in the system is a
// Unicode code point offset; bytes and UTF-16 units never leak into the API.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace postedit {

/// Half-open code-point interval. Spans require start < end; splices allow
/// start == end (insertion point).
struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end > start ? end - start : 0; }
  bool empty() const noexcept { return end <= start; }
  bool overlaps(const CharRange& other) const noexcept {
    return start < other.end && other.start < end;
  }
  bool contains(std::size_t pos) const noexcept { return start <= pos && pos < end; }

  friend bool operator==(const CharRange&, const CharRange&) = default;
};

bool is_valid_utf8(std::string_view text) noexcept;

/// Number of Unicode code points in a UTF-8 string. Assumes valid UTF-8.
std::size_t code_point_length(std::string_view text) noexcept;

/// Byte offset of code point `cp_index`; `cp_index == length` maps to
/// text.size(). Throws BoundsError past the end.
std::size_t byte_offset(std::string_view text, std::size_t cp_index);

/// Code-point slice [range.start, range.end). Throws BoundsError naming the
/// first offending index.
std::string extract_span_text(std::string_view text, const CharRange& range);

/// Code-point index of the first occurrence of `needle` in `haystack`.
std::optional<std::size_t> find_code_points(std::string_view haystack, std::string_view needle,
                                            std::size_t from_cp = 0);

/// Replace code points [range.start, range.end) with `replacement`. An empty
/// range inserts at range.start.
std::string splice_text(std::string_view text, const CharRange& range,
                        std::string_view replacement);

bool is_unicode_whitespace(char32_t cp) noexcept;

/// Decode one code point starting at byte `pos`; advances `pos`. Assumes
/// valid UTF-8.
char32_t decode_next(std::string_view text, std::size_t& pos) noexcept;

void append_utf8(std::string& out, char32_t cp);

}  // namespace postedit
