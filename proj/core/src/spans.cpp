#include "postedit/spans.hpp"

#include <algorithm>
#include <set>

namespace postedit {

namespace {

std::string describe(const ValidationReport& violations, const std::string& context) {
  std::string msg = context.empty() ? "annotation failed validation" : context;
  msg += ": ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) msg += "; ";
    msg += violations[i].rule;
    if (!violations[i].message.empty()) msg += " (" + violations[i].message + ")";
  }
  return msg;
}

void check_range(const ErrorSpan& span, const CharRange& range, std::size_t text_len,
                 std::string_view out_of_bounds_rule, std::string_view side,
                 ValidationReport& out) {
  if (range.start >= range.end) {
    out.push_back({{span.span_id},
                   std::string(rules::kEmptyRange),
                   {range.start, range.end},
                   std::string(side) + " range must satisfy start < end"});
    return;
  }
  if (range.end > text_len) {
    out.push_back({{span.span_id},
                   std::string(out_of_bounds_rule),
                   {range.end},
                   std::string(side) + " range end " + std::to_string(range.end) +
                       " exceeds text length " + std::to_string(text_len)});
  }
}

void check_overlaps(const std::vector<ErrorSpan>& spans, bool source_side,
                    ValidationReport& out) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& a = spans[i];
    const auto ra = source_side ? a.source_range : std::optional<CharRange>(a.translation_range);
    if (!ra || ra->empty()) continue;
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      const auto& b = spans[j];
      const auto rb =
          source_side ? b.source_range : std::optional<CharRange>(b.translation_range);
      if (!rb || rb->empty() || !ra->overlaps(*rb)) continue;
      const std::size_t lo = std::max(ra->start, rb->start);
      const std::size_t hi = std::min(ra->end, rb->end);
      out.push_back({{a.span_id, b.span_id},
                     std::string(source_side ? rules::kSourceOverlap : rules::kTranslationOverlap),
                     {lo, hi},
                     "spans share code points [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + ")"});
    }
  }
}

std::string next_span_id(const std::vector<ErrorSpan>& spans) {
  std::set<std::string_view> taken;
  for (const auto& s : spans) taken.insert(s.span_id);
  for (std::size_t k = spans.size() + 1;; ++k) {
    std::string candidate = "span-" + std::to_string(k);
    if (!taken.contains(candidate)) return candidate;
  }
}

bool same_payload(const ErrorSpan& a, const ErrorSpan& b) {
  return a.category == b.category && a.severity == b.severity &&
         a.source_range == b.source_range && a.translation_range == b.translation_range &&
         a.explanation == b.explanation;
}

}  // namespace

ValidationError::ValidationError(ValidationReport violations, const std::string& context)
    : Error(ErrorCode::kValidation, describe(violations, context)),
      violations_(std::move(violations)) {}

ValidationReport validate_annotation(const Annotation& annotation, const TranslationPair& pair) {
  ValidationReport out;
  if (annotation.pair_id != pair.pair_id) {
    out.push_back({{}, std::string(rules::kPairMismatch), {},
                   "annotation is for '" + annotation.pair_id + "', pair is '" + pair.pair_id +
                       "'"});
  }
  if (!is_valid_utf8(annotation.corrected_text)) {
    out.push_back({{}, std::string(rules::kInvalidUtf8), {}, "corrected_text is not valid UTF-8"});
  }
  if (annotation.overall_score && (*annotation.overall_score < 0 || *annotation.overall_score > 100)) {
    out.push_back({{}, std::string(rules::kScoreOutOfRange),
                   {static_cast<std::size_t>(std::max(0, *annotation.overall_score))},
                   "overall_score must lie in [0, 100]"});
  }

  const std::size_t source_len = code_point_length(pair.source_text);
  const std::size_t target_len = code_point_length(annotation.corrected_text);
  std::set<std::string_view> seen;
  for (const auto& span : annotation.spans) {
    if (span.span_id.empty()) {
      out.push_back({{}, std::string(rules::kEmptySpanId), {}, "span_id must be non-empty"});
    } else if (!seen.insert(span.span_id).second) {
      out.push_back({{span.span_id}, std::string(rules::kDuplicateSpanId), {},
                     "span_id appears more than once"});
    }
    check_range(span, span.translation_range, target_len, rules::kTranslationOutOfBounds,
                "translation", out);
    if (span.source_range) {
      check_range(span, *span.source_range, source_len, rules::kSourceOutOfBounds, "source", out);
    } else if (span.provenance == Provenance::kModel) {
      out.push_back({{span.span_id}, std::string(rules::kMissingSourceRange), {},
                     "model spans must carry a source range"});
    }
  }
  check_overlaps(annotation.spans, false, out);
  check_overlaps(annotation.spans, true, out);
  return out;
}

Annotation upsert_span(const Annotation& annotation, const TranslationPair& pair, ErrorSpan span) {
  const std::size_t target_len = code_point_length(annotation.corrected_text);
  const std::size_t source_len = code_point_length(pair.source_text);

  if (span.translation_range.end > target_len) {
    throw BoundsError(span.translation_range.end, target_len, "translation range out of bounds");
  }
  if (span.translation_range.start > target_len) {
    throw BoundsError(span.translation_range.start, target_len, "translation range out of bounds");
  }
  if (span.source_range) {
    if (span.source_range->end > source_len) {
      throw BoundsError(span.source_range->end, source_len, "source range out of bounds");
    }
    if (span.source_range->start > source_len) {
      throw BoundsError(span.source_range->start, source_len, "source range out of bounds");
    }
  }

  Annotation result = annotation;
  auto existing = std::find_if(result.spans.begin(), result.spans.end(),
                               [&](const ErrorSpan& s) { return s.span_id == span.span_id; });
  if (span.span_id.empty()) {
    span.span_id = next_span_id(result.spans);
    existing = result.spans.end();
  }

  std::vector<std::string> conflicts;
  for (const auto& other : result.spans) {
    if (other.span_id == span.span_id) continue;
    const bool target_clash = other.translation_range.overlaps(span.translation_range);
    const bool source_clash =
        other.source_range && span.source_range && other.source_range->overlaps(*span.source_range);
    if (target_clash || source_clash) conflicts.push_back(other.span_id);
  }
  if (!conflicts.empty()) throw OverlapError(std::move(conflicts));

  if (existing != result.spans.end()) {
    // Model origin is never erased by a human replacement.
    switch (existing->provenance) {
      case Provenance::kModel:
        span.provenance =
            same_payload(*existing, span) ? Provenance::kModel : Provenance::kHumanEditedModel;
        break;
      case Provenance::kHumanEditedModel:
        span.provenance = Provenance::kHumanEditedModel;
        break;
      case Provenance::kHuman:
        span.provenance = Provenance::kHuman;
        break;
    }
    *existing = std::move(span);
  } else {
    result.spans.push_back(std::move(span));
  }

  auto violations = validate_annotation(result, pair);
  if (!violations.empty()) throw ValidationError(std::move(violations), "upsert rejected");
  return result;
}

Annotation delete_span(const Annotation& annotation, std::string_view span_id) {
  Annotation result = annotation;
  const auto it = std::find_if(result.spans.begin(), result.spans.end(),
                               [&](const ErrorSpan& s) { return s.span_id == span_id; });
  if (it == result.spans.end()) {
    throw NotFoundError("no span with id '" + std::string(span_id) + "'");
  }
  result.spans.erase(it);
  return result;
}

EditResult apply_edit(const Annotation& annotation, const Splice& splice) {
  const CharRange target = splice.target();
  // Bounds are enforced here (throws BoundsError) before anything else.
  const std::string replaced = extract_span_text(annotation.corrected_text, target);

  EditResult out{annotation, {}, {}};
  if (replaced == splice.replacement) return out;

  out.annotation.corrected_text =
      splice_text(annotation.corrected_text, target, splice.replacement);

  const std::size_t a = splice.start;
  const std::size_t b = splice.end;
  const std::size_t r = code_point_length(splice.replacement);
  // new position of an index at or after the splice end
  const auto shift = [&](std::size_t pos) { return pos - b + a + r; };

  std::vector<ErrorSpan> kept;
  kept.reserve(annotation.spans.size());
  for (const auto& span : annotation.spans) {
    const std::size_t s = span.translation_range.start;
    const std::size_t e = span.translation_range.end;
    ErrorSpan moved = span;

    if (e <= a) {
      kept.push_back(std::move(moved));
      continue;
    }
    if (s >= b) {
      moved.translation_range = {shift(s), shift(e)};
      kept.push_back(std::move(moved));
      continue;
    }
    if (a <= s && e <= b) {
      out.dropped.push_back(span.span_id);
      continue;
    }
    if (s < a && b < e) {
      // The splice sits strictly inside the span: the span keeps both ends and
      // absorbs the replacement text.
      moved.translation_range = {s, shift(e)};
      kept.push_back(std::move(moved));
      continue;
    }
    // Exactly one endpoint lies inside the spliced region.
    CharRange cut;
    if (s < a) {
      cut = {s, a};
    } else {
      cut = {a + r, shift(e)};
    }
    if (cut.empty()) {
      out.dropped.push_back(span.span_id);
      continue;
    }
    moved.translation_range = cut;
    out.truncated.push_back(span.span_id);
    kept.push_back(std::move(moved));
  }
  out.annotation.spans = std::move(kept);
  return out;
}

std::vector<ErrorSpan> merge_suggestions(const std::vector<ErrorSpan>& model_spans,
                                         const std::vector<ErrorSpan>& human_spans) {
  std::vector<ErrorSpan> merged = human_spans;
  for (const auto& m : model_spans) {
    const bool clash = std::any_of(human_spans.begin(), human_spans.end(), [&](const ErrorSpan& h) {
      if (h.translation_range.overlaps(m.translation_range)) return true;
      return h.source_range && m.source_range && h.source_range->overlaps(*m.source_range);
    });
    if (!clash) merged.push_back(m);
  }
  std::stable_sort(merged.begin(), merged.end(), [](const ErrorSpan& x, const ErrorSpan& y) {
    return x.translation_range.start < y.translation_range.start;
  });
  return merged;
}

}  // namespace postedit
