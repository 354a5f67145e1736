#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace postedit::detection {

/// One span as emitted by a detector, before any checking. Field names match
/// the wire schema exactly.
struct RawDetectedSpan {
  std::string original_text;
  std::string error_type;
  std::string error_severity;
  std::int64_t start_index_orig = 0;
  std::int64_t end_index_orig = 0;
  std::int64_t start_index_translation = 0;
  std::int64_t end_index_translation = 0;
  std::string correct_text;

  friend bool operator==(const RawDetectedSpan&, const RawDetectedSpan&) = default;
};

/// Parse {"error_spans": [...]}. Unknown fields are ignored. Throws
/// ParseError (byte offset) on malformed JSON and SchemaError naming the
/// missing or mistyped field otherwise.
std::vector<RawDetectedSpan> parse_ec1_response(std::string_view body);

std::string serialize_ec1_response(const std::vector<RawDetectedSpan>& spans);

/// Extract the JSON object from chat-completion content that may be wrapped
/// in a markdown code fence.
std::string_view strip_code_fence(std::string_view content);

}  // namespace postedit::detection
