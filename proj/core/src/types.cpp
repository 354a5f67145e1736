#include "postedit/types.hpp"

#include <algorithm>
#include <cctype>

namespace postedit {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::kAddition: return "Addition";
    case ErrorCategory::kOmission: return "Omission";
    case ErrorCategory::kMistranslation: return "Mistranslation";
    case ErrorCategory::kUntranslated: return "Untranslated";
    case ErrorCategory::kGrammar: return "Grammar";
    case ErrorCategory::kSpelling: return "Spelling";
    case ErrorCategory::kTypography: return "Typography";
    case ErrorCategory::kUnintelligible: return "Unintelligible";
  }
  return "";
}

std::string_view to_string(Severity s) noexcept {
  return s == Severity::kMajor ? "Major" : "Minor";
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::kModel: return "model";
    case Provenance::kHuman: return "human";
    case Provenance::kHumanEditedModel: return "human_edited_model";
  }
  return "";
}

std::string_view to_string(PairStatus s) noexcept {
  switch (s) {
    case PairStatus::kPending: return "pending";
    case PairStatus::kInProgress: return "in_progress";
    case PairStatus::kCompleted: return "completed";
  }
  return "";
}

std::optional<ErrorCategory> parse_category(std::string_view text) noexcept {
  for (const auto c : kAllCategories) {
    if (iequals(text, to_string(c))) return c;
  }
  return std::nullopt;
}

std::optional<Severity> parse_severity(std::string_view text) noexcept {
  if (iequals(text, "minor")) return Severity::kMinor;
  if (iequals(text, "major")) return Severity::kMajor;
  return std::nullopt;
}

std::optional<Provenance> parse_provenance(std::string_view text) noexcept {
  for (const auto p : {Provenance::kModel, Provenance::kHuman, Provenance::kHumanEditedModel}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<PairStatus> parse_status(std::string_view text) noexcept {
  for (const auto s : {PairStatus::kPending, PairStatus::kInProgress, PairStatus::kCompleted}) {
    if (text == to_string(s)) return s;
  }
  return std::nullopt;
}

bool is_forward_transition(PairStatus from, PairStatus to) noexcept {
  return static_cast<int>(to) >= static_cast<int>(from);
}

bool TranslationPair::same_content(const TranslationPair& other) const noexcept {
  return pair_id == other.pair_id && dataset_id == other.dataset_id &&
         source_lang == other.source_lang && target_lang == other.target_lang &&
         source_text == other.source_text && mt_text == other.mt_text;
}

bool is_language_tag(std::string_view tag) noexcept {
  if (tag.empty()) return false;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= tag.size()) {
    std::size_t dash = tag.find('-', pos);
    if (dash == std::string_view::npos) dash = tag.size();
    const auto sub = tag.substr(pos, dash - pos);
    if (sub.empty() || sub.size() > 8) return false;
    if (first && sub.size() < 2) return false;
    for (const char ch : sub) {
      const auto u = static_cast<unsigned char>(ch);
      if (first ? !std::isalpha(u) : !std::isalnum(u)) return false;
    }
    first = false;
    pos = dash + 1;
    if (dash == tag.size()) break;
  }
  return true;
}

}  // namespace postedit
