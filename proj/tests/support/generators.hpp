#pragma once

// Random domain values for property tests. Text mixes ASCII, Latin-1,
// CJK, kana and astral-plane emoji so code-point and byte offsets diverge.

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <vector>

#include "postedit/exporter.hpp"
#include "postedit/types.hpp"
#include "postedit/unicode.hpp"

namespace postedit::testing {

using Rng = std::mt19937_64;

inline constexpr std::array<std::string_view, 24> kGlyphs = {
    "a", "b", "e", "n", "r", "t", " ", " ", ",", "\"", "\n", "é",
    "ß", "漢", "字", "語", "中", "文", "か", "な", "😀", "🎉", "👍🏽", "\t",
};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_text(Rng& rng, std::size_t min_len, std::size_t max_len) {
  std::string out;
  const auto n = uniform(rng, min_len, max_len);
  for (std::size_t i = 0; i < n; ++i) out += kGlyphs[uniform(rng, 0, kGlyphs.size() - 1)];
  return out;
}

/// Up to `max_count` pairwise disjoint, non-empty ranges inside [0, length).
inline std::vector<CharRange> disjoint_ranges(Rng& rng, std::size_t length, std::size_t max_count) {
  std::vector<CharRange> out;
  if (length == 0) return out;
  std::vector<std::size_t> cuts;
  const auto count = uniform(rng, 0, std::min(max_count, length));
  for (std::size_t i = 0; i < 2 * count; ++i) cuts.push_back(uniform(rng, 0, length));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); i += 2) {
    if (cuts[i] < cuts[i + 1]) out.push_back({cuts[i], cuts[i + 1]});
  }
  return out;
}

inline TranslationPair random_pair(Rng& rng, std::string pair_id = "p-0") {
  TranslationPair p;
  p.pair_id = std::move(pair_id);
  p.dataset_id = "ds";
  p.source_lang = "en";
  p.target_lang = coin(rng) ? "zh" : "ja";
  p.source_text = random_text(rng, 1, 40);
  p.mt_text = random_text(rng, 1, 40);
  return p;
}

inline ErrorSpan random_span_fields(Rng& rng) {
  ErrorSpan s;
  s.category = kAllCategories[uniform(rng, 0, kAllCategories.size() - 1)];
  s.severity = coin(rng) ? Severity::kMajor : Severity::kMinor;
  s.explanation = random_text(rng, 0, 12);
  const std::array<Provenance, 3> provenances = {Provenance::kModel, Provenance::kHuman,
                                                 Provenance::kHumanEditedModel};
  s.provenance = provenances[uniform(rng, 0, 2)];
  return s;
}

/// A valid annotation of `pair`: disjoint translation ranges over a random
/// corrected text, each with an optional disjoint source range.
inline Annotation random_annotation(Rng& rng, const TranslationPair& pair) {
  Annotation a;
  a.pair_id = pair.pair_id;
  a.annotator_id = "annotator";
  a.corrected_text = random_text(rng, 0, 40);
  const auto translation = disjoint_ranges(rng, code_point_length(a.corrected_text), 6);
  auto source = disjoint_ranges(rng, code_point_length(pair.source_text), translation.size());
  std::shuffle(source.begin(), source.end(), rng);
  for (std::size_t i = 0; i < translation.size(); ++i) {
    auto s = random_span_fields(rng);
    s.span_id = "s" + std::to_string(i);
    s.translation_range = translation[i];
    if (i < source.size() && coin(rng, 0.7)) {
      s.source_range = source[i];
    } else if (s.provenance == Provenance::kModel) {
      s.provenance = Provenance::kHuman;
    }
    a.spans.push_back(std::move(s));
  }
  if (coin(rng)) a.overall_score = static_cast<int>(uniform(rng, 0, 100));
  return a;
}

inline Splice random_splice(Rng& rng, const std::string& text) {
  const auto n = code_point_length(text);
  Splice s;
  s.start = uniform(rng, 0, n);
  s.end = uniform(rng, s.start, std::min(n, s.start + 8));
  s.replacement = coin(rng, 0.15) ? extract_span_text(text, s.target()) : random_text(rng, 0, 6);
  return s;
}

inline exporter::ExportRecord random_record(Rng& rng, std::size_t index) {
  const auto pair = random_pair(rng, "pair-" + std::to_string(index));
  auto annotation = random_annotation(rng, pair);
  annotation.annotator_id = random_text(rng, 1, 6);
  return exporter::make_record(pair, annotation);
}

}  // namespace postedit::testing
