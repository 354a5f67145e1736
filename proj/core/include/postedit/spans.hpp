#pragma once

// Span editing over an Annotation: validation, insert/replace/delete, and
// re-anchoring of translation-side spans when the corrected text is spliced.
// Every function here is pure; inputs are never mutated.

#include <string>
#include <vector>

#include "postedit/error.hpp"
#include "postedit/types.hpp"

namespace postedit {

/// Rule identifiers reported in a Violation.
namespace rules {
inline constexpr std::string_view kPairMismatch = "pair_mismatch";
inline constexpr std::string_view kDuplicateSpanId = "duplicate_span_id";
inline constexpr std::string_view kEmptySpanId = "empty_span_id";
inline constexpr std::string_view kEmptyRange = "empty_range";
inline constexpr std::string_view kTranslationOutOfBounds = "translation_out_of_bounds";
inline constexpr std::string_view kSourceOutOfBounds = "source_out_of_bounds";
inline constexpr std::string_view kMissingSourceRange = "missing_source_range";
inline constexpr std::string_view kTranslationOverlap = "translation_overlap";
inline constexpr std::string_view kSourceOverlap = "source_overlap";
inline constexpr std::string_view kScoreOutOfRange = "score_out_of_range";
inline constexpr std::string_view kInvalidUtf8 = "invalid_utf8";
}  // namespace rules

struct Violation {
  std::vector<std::string> span_ids;
  std::string rule;
  std::vector<std::size_t> indices;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

class ValidationError : public Error {
 public:
  ValidationError(ValidationReport violations, const std::string& context = {});

  const ValidationReport& violations() const noexcept { return violations_; }

 private:
  ValidationReport violations_;
};

/// Check every Annotation and ErrorSpan invariant against the pair. Source
/// ranges index pair.source_text; translation ranges index corrected_text.
/// An empty report means the annotation is valid.
ValidationReport validate_annotation(const Annotation& annotation, const TranslationPair& pair);

/// Insert `span` (unknown or empty span_id) or replace the span with the same
/// id. Replacing a model span marks it human_edited_model. Rejected wholesale
/// on any violation: BoundsError, OverlapError, or ValidationError.
Annotation upsert_span(const Annotation& annotation, const TranslationPair& pair, ErrorSpan span);

/// Throws NotFoundError for an unknown id.
Annotation delete_span(const Annotation& annotation, std::string_view span_id);

struct EditResult {
  Annotation annotation;
  std::vector<std::string> dropped;
  std::vector<std::string> truncated;
};

/// Apply a splice to corrected_text and re-anchor translation ranges. Spans
/// entirely covered by the splice are dropped; spans straddling one splice
/// boundary are cut back to their surviving part; spans after the splice
/// shift by len(replacement) - (end - start). A splice whose replacement
/// equals the text it replaces changes nothing. Source ranges are untouched.
EditResult apply_edit(const Annotation& annotation, const Splice& splice);

/// Union of model and human spans; a model span overlapping any human span
/// (on either side) is discarded. Output is ordered by translation start.
std::vector<ErrorSpan> merge_suggestions(const std::vector<ErrorSpan>& model_spans,
                                         const std::vector<ErrorSpan>& human_spans);

}  // namespace postedit
