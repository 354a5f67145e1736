#pragma once

#include <string>

#include "postedit/types.hpp"

namespace postedit::detection {

/// Instruction prompt for an LLM error detector. Carries the linguist
/// persona, the eight-category taxonomy, the two severities, the span rules
/// (non-overlapping, 0-based code-point indexing, exclusive end), the JSON
/// response schema, and the source / MT texts on labeled lines.
std::string build_ec1_prompt(const TranslationPair& pair);

/// System message used alongside the prompt for chat-style endpoints.
std::string ec1_system_message();

}  // namespace postedit::detection
