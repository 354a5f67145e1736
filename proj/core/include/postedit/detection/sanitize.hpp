#pragma once

#include <string>
#include <utility>
#include <vector>

#include "postedit/detection/response.hpp"
#include "postedit/types.hpp"

namespace postedit::detection {

namespace drop_reason {
inline constexpr std::string_view kUnknownType = "unknown error type";
inline constexpr std::string_view kUnknownSeverity = "unknown error severity";
inline constexpr std::string_view kSourceMismatch = "source text mismatch";
inline constexpr std::string_view kTranslationRange = "translation range out of bounds";
inline constexpr std::string_view kOverlap = "overlaps a kept span";
}  // namespace drop_reason

struct DroppedSpan {
  std::size_t index = 0;
  std::string reason;

  friend bool operator==(const DroppedSpan&, const DroppedSpan&) = default;
};

/// accepted + dropped.size() equals the input count. Each accepted span is
/// counted at most once under relocated or clamped (relocation wins).
struct SanitizationReport {
  std::size_t accepted = 0;
  std::size_t relocated = 0;
  std::size_t clamped = 0;
  std::vector<DroppedSpan> dropped;

  friend bool operator==(const SanitizationReport&, const SanitizationReport&) = default;
};

/// Translation ends may overshoot the text by at most this many code points
/// before the span is dropped instead of clamped.
inline constexpr std::size_t kClampTolerance = 2;

struct SanitizedSpans {
  std::vector<ErrorSpan> spans;
  SanitizationReport report;
};

/// Turn untrusted detector output into valid model spans over the pair.
/// Per raw span, in order: map type and severity (case-insensitive), check
/// original_text against the source indices (relocating to its first
/// occurrence on mismatch), clamp translation ends overshooting by at most
/// kClampTolerance, then resolve overlaps keeping higher severity and then
/// earlier start. Output is sorted by translation start; span ids are
/// "model-<raw index>".
SanitizedSpans sanitize_spans(const std::vector<RawDetectedSpan>& raw, const TranslationPair& pair);

}  // namespace postedit::detection
