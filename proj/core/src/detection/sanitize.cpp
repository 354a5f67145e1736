#include "postedit/detection/sanitize.hpp"

#include <algorithm>

namespace postedit::detection {

namespace {

struct Candidate {
  std::size_t index;
  ErrorSpan span;
  bool relocated = false;
  bool clamped = false;
};

std::optional<CharRange> locate_source(const RawDetectedSpan& raw, std::string_view source,
                                       std::size_t source_len, bool& relocated) {
  if (raw.original_text.empty() || !is_valid_utf8(raw.original_text)) return std::nullopt;
  const std::size_t want = code_point_length(raw.original_text);
  if (raw.start_index_orig >= 0 && raw.end_index_orig > raw.start_index_orig &&
      static_cast<std::size_t>(raw.end_index_orig) <= source_len) {
    const CharRange given{static_cast<std::size_t>(raw.start_index_orig),
                          static_cast<std::size_t>(raw.end_index_orig)};
    if (extract_span_text(source, given) == raw.original_text) return given;
  }
  const auto hit = find_code_points(source, raw.original_text);
  if (!hit) return std::nullopt;
  relocated = true;
  return CharRange{*hit, *hit + want};
}

std::optional<CharRange> fit_translation(const RawDetectedSpan& raw, std::size_t target_len,
                                         bool& clamped) {
  if (raw.start_index_translation < 0 || raw.end_index_translation < 0) return std::nullopt;
  auto start = static_cast<std::size_t>(raw.start_index_translation);
  auto end = static_cast<std::size_t>(raw.end_index_translation);
  if (end > target_len) {
    if (end - target_len > kClampTolerance) return std::nullopt;
    end = target_len;
    clamped = true;
  }
  if (start >= end) return std::nullopt;
  return CharRange{start, end};
}

}  // namespace

SanitizedSpans sanitize_spans(const std::vector<RawDetectedSpan>& raw, const TranslationPair& pair) {
  SanitizedSpans out;
  const std::size_t source_len = code_point_length(pair.source_text);
  const std::size_t target_len = code_point_length(pair.mt_text);

  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& r = raw[i];
    const auto category = parse_category(r.error_type);
    if (!category) {
      out.report.dropped.push_back({i, std::string(drop_reason::kUnknownType)});
      continue;
    }
    const auto severity = parse_severity(r.error_severity);
    if (!severity) {
      out.report.dropped.push_back({i, std::string(drop_reason::kUnknownSeverity)});
      continue;
    }
    Candidate c{i, {}, false, false};
    const auto source_range = locate_source(r, pair.source_text, source_len, c.relocated);
    if (!source_range) {
      out.report.dropped.push_back({i, std::string(drop_reason::kSourceMismatch)});
      continue;
    }
    const auto translation_range = fit_translation(r, target_len, c.clamped);
    if (!translation_range) {
      out.report.dropped.push_back({i, std::string(drop_reason::kTranslationRange)});
      continue;
    }
    c.span.span_id = "model-" + std::to_string(i);
    c.span.category = *category;
    c.span.severity = *severity;
    c.span.source_range = source_range;
    c.span.translation_range = *translation_range;
    c.span.explanation = r.correct_text;
    c.span.provenance = Provenance::kModel;
    candidates.push_back(std::move(c));
  }

  // Overlap resolution: higher severity first, then earlier start; the raw
  // index makes the order total.
  std::vector<const Candidate*> order;
  order.reserve(candidates.size());
  for (const auto& c : candidates) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Candidate* a, const Candidate* b) {
    if (a->span.severity != b->span.severity) return a->span.severity == Severity::kMajor;
    if (a->span.translation_range.start != b->span.translation_range.start) {
      return a->span.translation_range.start < b->span.translation_range.start;
    }
    if (a->span.source_range->start != b->span.source_range->start) {
      return a->span.source_range->start < b->span.source_range->start;
    }
    return a->index < b->index;
  });

  std::vector<const Candidate*> kept;
  for (const Candidate* c : order) {
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Candidate* k) {
      return k->span.translation_range.overlaps(c->span.translation_range) ||
             k->span.source_range->overlaps(*c->span.source_range);
    });
    if (clash) {
      out.report.dropped.push_back({c->index, std::string(drop_reason::kOverlap)});
    } else {
      kept.push_back(c);
    }
  }

  std::sort(kept.begin(), kept.end(), [](const Candidate* a, const Candidate* b) {
    if (a->span.translation_range.start != b->span.translation_range.start) {
      return a->span.translation_range.start < b->span.translation_range.start;
    }
    return a->index < b->index;
  });
  for (const Candidate* c : kept) {
    out.spans.push_back(c->span);
    if (c->relocated) {
      ++out.report.relocated;
    } else if (c->clamped) {
      ++out.report.clamped;
    }
  }
  out.report.accepted = kept.size();
  std::sort(out.report.dropped.begin(), out.report.dropped.end(),
            [](const DroppedSpan& a, const DroppedSpan& b) { return a.index < b.index; });
  return out;
}

}  // namespace postedit::detection
