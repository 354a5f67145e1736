#pragma once

// JSON encoding of the domain types. Objects use a fixed key order so that
// identical values always serialize to identical bytes.

#include <json.hpp>

#include "postedit/spans.hpp"
#include "postedit/types.hpp"

namespace postedit {

using Json = nlohmann::ordered_json;

Json to_json(const CharRange& range);
Json to_json(const ErrorSpan& span);
Json to_json(const TranslationPair& pair);
Json to_json(const Annotation& annotation);
Json to_json(const Violation& violation);
Json to_json(const ValidationReport& report);

CharRange range_from_json(const Json& j, std::string_view field = "range");
ErrorSpan span_from_json(const Json& j);
TranslationPair pair_from_json(const Json& j);
Annotation annotation_from_json(const Json& j);

/// Parse text as JSON; throws ParseError carrying the byte offset.
Json parse_json(std::string_view text);

/// Compact, UTF-8 preserving serialization (no \u escapes for non-ASCII).
std::string dump_json(const Json& j);

namespace json_field {

// Required-field accessors; throw SchemaError naming the field.
const Json& require(const Json& obj, std::string_view field);
std::string require_string(const Json& obj, std::string_view field);
std::int64_t require_integer(const Json& obj, std::string_view field);
std::optional<std::string> optional_string(const Json& obj, std::string_view field);
std::optional<std::int64_t> optional_integer(const Json& obj, std::string_view field);

}  // namespace json_field

}  // namespace postedit
