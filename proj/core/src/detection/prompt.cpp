#include "postedit/detection/prompt.hpp"

#include "postedit/json_codec.hpp"

namespace postedit::detection {

namespace {

constexpr std::string_view kCategoryGuide[] = {
    "Addition: content appears in the translation that has no counterpart in the source.",
    "Omission: content of the source is missing from the translation.",
    "Mistranslation: the translation renders the source meaning inaccurately.",
    "Untranslated: a segment that should have been translated was left in the source language.",
    "Grammar: the translation breaks grammatical rules of the target language.",
    "Spelling: a word in the translation is misspelled.",
    "Typography: punctuation, capitalization or spacing is wrong.",
    "Unintelligible: the text is garbled or cannot be understood.",
};

}  // namespace

std::string ec1_system_message() {
  return "You are a professional linguist specializing in machine translation evaluation. "
         "You answer only with JSON.";
}

std::string build_ec1_prompt(const TranslationPair& pair) {
  std::string p;
  p += "You are a professional linguist specializing in machine translation evaluation.\n";
  p += "Compare the source sentence with its machine translation and detect fine-grained "
       "translation errors.\n\n";

  p += "Label every error with exactly one error_type from this taxonomy:\n";
  for (std::size_t i = 0; i < kAllCategories.size(); ++i) {
    p += "- ";
    p += kCategoryGuide[i];
    p += '\n';
  }
  p += "\nAssign every error an error_severity of Minor or Major.\n\n";

  p += "Span rules:\n";
  p += "- Give precise, non-overlapping character-level spans in both the source and the "
       "translation text. No two spans may share a character on the same side.\n";
  p += "- Use strict 0-based character indexing, counting Unicode code points. The start index "
       "is inclusive and the end index is exclusive.\n";
  p += "- original_text must equal the source characters between start_index_orig and "
       "end_index_orig exactly.\n";
  p += "- Put a brief explanation of the error in correct_text.\n";
  p += "- If the translation has no errors, return an empty error_spans array.\n\n";

  p += "Respond with a single JSON object of exactly this shape:\n";
  Json example = Json::object();
  Json span = Json::object();
  span["original_text"] = "<source substring>";
  span["error_type"] = "<one of the eight categories>";
  span["error_severity"] = "<Minor|Major>";
  span["start_index_orig"] = 0;
  span["end_index_orig"] = 0;
  span["start_index_translation"] = 0;
  span["end_index_translation"] = 0;
  span["correct_text"] = "<brief explanation>";
  example["error_spans"] = Json::array({span});
  p += example.dump(2);
  p += "\n\n";

  p += "Source language: " + pair.source_lang + "\n";
  p += "Target language: " + pair.target_lang + "\n";
  p += "Source: \"" + pair.source_text + "\"\n";
  p += "MT: \"" + pair.mt_text + "\"\n";
  return p;
}

}  // namespace postedit::detection
