#include "postedit/json_codec.hpp"

#include <limits>

#include "postedit/error.hpp"

namespace postedit {

namespace json_field {

const Json& require(const Json& obj, std::string_view field) {
  if (!obj.is_object()) throw SchemaError(std::string(field), "expected an object holding '" +
                                                                   std::string(field) + "'");
  const auto it = obj.find(field);
  if (it == obj.end()) {
    throw SchemaError(std::string(field), "missing required field '" + std::string(field) + "'");
  }
  return *it;
}

std::string require_string(const Json& obj, std::string_view field) {
  const Json& v = require(obj, field);
  if (!v.is_string()) {
    throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be a string");
  }
  return v.get<std::string>();
}

std::int64_t require_integer(const Json& obj, std::string_view field) {
  const Json& v = require(obj, field);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be an integer");
}

std::optional<std::string> optional_string(const Json& obj, std::string_view field) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::int64_t> optional_integer(const Json& obj, std::string_view field) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) {
    throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace json_field

namespace {

using namespace json_field;

std::size_t non_negative(std::int64_t v, std::string_view field) {
  if (v < 0) {
    throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be >= 0");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

Json to_json(const CharRange& range) {
  Json j = Json::object();
  j["start"] = range.start;
  j["end"] = range.end;
  return j;
}

Json to_json(const ErrorSpan& span) {
  Json j = Json::object();
  j["span_id"] = span.span_id;
  j["category"] = to_string(span.category);
  j["severity"] = to_string(span.severity);
  j["source_range"] = span.source_range ? to_json(*span.source_range) : Json(nullptr);
  j["translation_range"] = to_json(span.translation_range);
  j["explanation"] = span.explanation;
  j["provenance"] = to_string(span.provenance);
  return j;
}

Json to_json(const TranslationPair& pair) {
  Json j = Json::object();
  j["pair_id"] = pair.pair_id;
  j["dataset_id"] = pair.dataset_id;
  j["source_lang"] = pair.source_lang;
  j["target_lang"] = pair.target_lang;
  j["source_text"] = pair.source_text;
  j["mt_text"] = pair.mt_text;
  j["status"] = to_string(pair.status);
  return j;
}

Json to_json(const Annotation& annotation) {
  Json j = Json::object();
  j["pair_id"] = annotation.pair_id;
  j["annotator_id"] = annotation.annotator_id;
  j["corrected_text"] = annotation.corrected_text;
  Json spans = Json::array();
  for (const auto& s : annotation.spans) spans.push_back(to_json(s));
  j["spans"] = std::move(spans);
  j["overall_score"] = annotation.overall_score ? Json(*annotation.overall_score) : Json(nullptr);
  j["created_at"] = annotation.created_at;
  j["updated_at"] = annotation.updated_at;
  j["version"] = annotation.version;
  return j;
}

Json to_json(const Violation& violation) {
  Json j = Json::object();
  j["span_ids"] = violation.span_ids;
  j["rule"] = violation.rule;
  j["indices"] = violation.indices;
  j["message"] = violation.message;
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j = Json::array();
  for (const auto& v : report) j.push_back(to_json(v));
  return j;
}

CharRange range_from_json(const Json& j, std::string_view field) {
  if (!j.is_object()) {
    throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be an object");
  }
  return {non_negative(require_integer(j, "start"), "start"),
          non_negative(require_integer(j, "end"), "end")};
}

ErrorSpan span_from_json(const Json& j) {
  ErrorSpan span;
  span.span_id = optional_string(j, "span_id").value_or("");
  const auto category = require_string(j, "category");
  const auto parsed_category = parse_category(category);
  if (!parsed_category) throw SchemaError("category", "unknown error category '" + category + "'");
  span.category = *parsed_category;
  const auto severity = require_string(j, "severity");
  const auto parsed_severity = parse_severity(severity);
  if (!parsed_severity) throw SchemaError("severity", "unknown severity '" + severity + "'");
  span.severity = *parsed_severity;
  if (const auto it = j.find("source_range"); it != j.end() && !it->is_null()) {
    span.source_range = range_from_json(*it, "source_range");
  }
  span.translation_range = range_from_json(require(j, "translation_range"), "translation_range");
  span.explanation = optional_string(j, "explanation").value_or("");
  const auto provenance = optional_string(j, "provenance").value_or("human");
  const auto parsed_provenance = parse_provenance(provenance);
  if (!parsed_provenance) throw SchemaError("provenance", "unknown provenance '" + provenance + "'");
  span.provenance = *parsed_provenance;
  return span;
}

TranslationPair pair_from_json(const Json& j) {
  TranslationPair pair;
  pair.pair_id = require_string(j, "pair_id");
  pair.dataset_id = optional_string(j, "dataset_id").value_or("");
  pair.source_lang = require_string(j, "source_lang");
  pair.target_lang = require_string(j, "target_lang");
  pair.source_text = require_string(j, "source_text");
  pair.mt_text = require_string(j, "mt_text");
  if (const auto status = optional_string(j, "status")) {
    const auto parsed = parse_status(*status);
    if (!parsed) throw SchemaError("status", "unknown status '" + *status + "'");
    pair.status = *parsed;
  }
  return pair;
}

Annotation annotation_from_json(const Json& j) {
  Annotation a;
  a.pair_id = optional_string(j, "pair_id").value_or("");
  a.annotator_id = optional_string(j, "annotator_id").value_or("");
  a.corrected_text = require_string(j, "corrected_text");
  const Json& spans = require(j, "spans");
  if (!spans.is_array()) throw SchemaError("spans", "field 'spans' must be an array");
  for (const auto& s : spans) a.spans.push_back(span_from_json(s));
  if (const auto score = optional_integer(j, "overall_score")) {
    if (*score < std::numeric_limits<int>::min() || *score > std::numeric_limits<int>::max()) {
      throw SchemaError("overall_score", "overall_score out of range");
    }
    a.overall_score = static_cast<int>(*score);
  }
  a.created_at = optional_integer(j, "created_at").value_or(0);
  a.updated_at = optional_integer(j, "updated_at").value_or(0);
  a.version = static_cast<std::uint64_t>(
      non_negative(optional_integer(j, "version").value_or(0), "version"));
  return a;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports a 1-based count of bytes read; expose a 0-based offset.
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, std::string("malformed JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace postedit
