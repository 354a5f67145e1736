#include "postedit/detection/response.hpp"

#include "postedit/error.hpp"
#include "postedit/json_codec.hpp"

namespace postedit::detection {

namespace {

std::string span_field(std::size_t index, std::string_view name) {
  return "error_spans[" + std::to_string(index) + "]." + std::string(name);
}

std::string string_at(const Json& obj, std::size_t index, std::string_view name) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw SchemaError(std::string(name), "missing field " + span_field(index, name));
  }
  if (!it->is_string()) {
    throw SchemaError(std::string(name), span_field(index, name) + " must be a string");
  }
  return it->get<std::string>();
}

std::int64_t integer_at(const Json& obj, std::size_t index, std::string_view name) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw SchemaError(std::string(name), "missing field " + span_field(index, name));
  }
  if (!it->is_number_integer()) {
    throw SchemaError(std::string(name), span_field(index, name) + " must be an integer");
  }
  return it->get<std::int64_t>();
}

}  // namespace

std::vector<RawDetectedSpan> parse_ec1_response(std::string_view body) {
  const Json doc = parse_json(body);
  if (!doc.is_object()) throw SchemaError("error_spans", "response must be a JSON object");
  const auto it = doc.find("error_spans");
  if (it == doc.end()) throw SchemaError("error_spans", "missing field error_spans");
  if (!it->is_array()) throw SchemaError("error_spans", "error_spans must be an array");

  std::vector<RawDetectedSpan> out;
  out.reserve(it->size());
  std::size_t index = 0;
  for (const auto& item : *it) {
    if (!item.is_object()) {
      throw SchemaError("error_spans", "error_spans[" + std::to_string(index) + "] must be an object");
    }
    RawDetectedSpan s;
    s.original_text = string_at(item, index, "original_text");
    s.error_type = string_at(item, index, "error_type");
    s.error_severity = string_at(item, index, "error_severity");
    s.start_index_orig = integer_at(item, index, "start_index_orig");
    s.end_index_orig = integer_at(item, index, "end_index_orig");
    s.start_index_translation = integer_at(item, index, "start_index_translation");
    s.end_index_translation = integer_at(item, index, "end_index_translation");
    s.correct_text = string_at(item, index, "correct_text");
    out.push_back(std::move(s));
    ++index;
  }
  return out;
}

std::string serialize_ec1_response(const std::vector<RawDetectedSpan>& spans) {
  Json list = Json::array();
  for (const auto& s : spans) {
    Json j = Json::object();
    j["original_text"] = s.original_text;
    j["error_type"] = s.error_type;
    j["error_severity"] = s.error_severity;
    j["start_index_orig"] = s.start_index_orig;
    j["end_index_orig"] = s.end_index_orig;
    j["start_index_translation"] = s.start_index_translation;
    j["end_index_translation"] = s.end_index_translation;
    j["correct_text"] = s.correct_text;
    list.push_back(std::move(j));
  }
  Json doc = Json::object();
  doc["error_spans"] = std::move(list);
  return dump_json(doc);
}

std::string_view strip_code_fence(std::string_view content) {
  const auto first = content.find('{');
  const auto last = content.rfind('}');
  if (first == std::string_view::npos || last == std::string_view::npos || last < first) {
    return content;
  }
  return content.substr(first, last - first + 1);
}

}  // namespace postedit::detection
