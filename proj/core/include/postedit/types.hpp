#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "postedit/unicode.hpp"

namespace postedit {

/// Simplified MQM taxonomy. Parsing accepts exactly these eight labels.
enum class ErrorCategory {
  kAddition,
  kOmission,
  kMistranslation,
  kUntranslated,
  kGrammar,
  kSpelling,
  kTypography,
  kUnintelligible,
};

inline constexpr std::array<ErrorCategory, 8> kAllCategories = {
    ErrorCategory::kAddition,     ErrorCategory::kOmission,   ErrorCategory::kMistranslation,
    ErrorCategory::kUntranslated, ErrorCategory::kGrammar,    ErrorCategory::kSpelling,
    ErrorCategory::kTypography,   ErrorCategory::kUnintelligible,
};

enum class Severity { kMinor, kMajor };

enum class Provenance { kModel, kHuman, kHumanEditedModel };

enum class PairStatus { kPending, kInProgress, kCompleted };

std::string_view to_string(ErrorCategory c) noexcept;
std::string_view to_string(Severity s) noexcept;
std::string_view to_string(Provenance p) noexcept;
std::string_view to_string(PairStatus s) noexcept;

// Category and severity parsing is case-insensitive; output is canonical case.
std::optional<ErrorCategory> parse_category(std::string_view text) noexcept;
std::optional<Severity> parse_severity(std::string_view text) noexcept;
// Provenance and status use fixed lowercase wire labels.
std::optional<Provenance> parse_provenance(std::string_view text) noexcept;
std::optional<PairStatus> parse_status(std::string_view text) noexcept;

/// Forward-only workflow: pending -> in_progress -> completed. Staying put is
/// allowed; moving backward requires an explicit reset.
bool is_forward_transition(PairStatus from, PairStatus to) noexcept;

struct ErrorSpan {
  std::string span_id;
  ErrorCategory category = ErrorCategory::kMistranslation;
  Severity severity = Severity::kMinor;
  std::optional<CharRange> source_range;
  CharRange translation_range;
  std::string explanation;
  Provenance provenance = Provenance::kHuman;

  friend bool operator==(const ErrorSpan&, const ErrorSpan&) = default;
};

struct TranslationPair {
  std::string pair_id;
  std::string dataset_id;
  std::string source_lang;
  std::string target_lang;
  std::string source_text;
  std::string mt_text;
  PairStatus status = PairStatus::kPending;

  /// Equality of everything except workflow status.
  bool same_content(const TranslationPair& other) const noexcept;

  friend bool operator==(const TranslationPair&, const TranslationPair&) = default;
};

/// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

struct Annotation {
  std::string pair_id;
  std::string annotator_id;
  std::string corrected_text;
  std::vector<ErrorSpan> spans;
  std::optional<int> overall_score;
  TimestampMs created_at = 0;
  TimestampMs updated_at = 0;
  std::uint64_t version = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// One atomic text edit: replace code points [start, end) with `replacement`.
/// start == end is a pure insertion.
struct Splice {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;

  CharRange target() const noexcept { return {start, end}; }
};

/// Loose BCP-47 shape check: alpha primary subtag of 2-8 letters followed by
/// alphanumeric subtags of 1-8 characters.
bool is_language_tag(std::string_view tag) noexcept;

}  // namespace postedit
