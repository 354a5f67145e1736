#include "postedit/exporter.hpp"

#include "postedit/csv.hpp"
#include "postedit/json_codec.hpp"

namespace postedit::exporter {

namespace {

std::string record_message(std::size_t index, const ValidationReport& violations) {
  std::string msg = "record " + std::to_string(index) + " invalid";
  if (!violations.empty()) msg += " (" + violations.front().rule + ")";
  return msg;
}

Json span_to_json(const ExportSpan& s) {
  Json j = Json::object();
  j["category"] = to_string(s.category);
  j["severity"] = to_string(s.severity);
  j["source_start"] = s.source_start ? Json(*s.source_start) : Json(nullptr);
  j["source_end"] = s.source_end ? Json(*s.source_end) : Json(nullptr);
  j["translation_start"] = s.translation_start;
  j["translation_end"] = s.translation_end;
  j["explanation"] = s.explanation;
  j["provenance"] = to_string(s.provenance);
  return j;
}

Json record_to_json(const ExportRecord& r) {
  Json j = Json::object();
  j["pair_id"] = r.pair_id;
  j["source_lang"] = r.source_lang;
  j["target_lang"] = r.target_lang;
  j["source_text"] = r.source_text;
  j["mt_text"] = r.mt_text;
  j["corrected_text"] = r.corrected_text;
  j["annotator_id"] = r.annotator_id;
  j["overall_score"] = r.overall_score ? Json(*r.overall_score) : Json(nullptr);
  Json spans = Json::array();
  for (const auto& s : r.spans) spans.push_back(span_to_json(s));
  j["spans"] = std::move(spans);
  return j;
}

std::optional<std::size_t> optional_index(const Json& j, std::string_view field) {
  const auto v = json_field::optional_integer(j, field);
  if (!v) return std::nullopt;
  if (*v < 0) throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be >= 0");
  return static_cast<std::size_t>(*v);
}

std::size_t required_index(const Json& j, std::string_view field) {
  const auto v = json_field::require_integer(j, field);
  if (v < 0) throw SchemaError(std::string(field), "field '" + std::string(field) + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

ExportSpan span_from_json(const Json& j) {
  using namespace json_field;
  ExportSpan s;
  const auto category = require_string(j, "category");
  const auto c = parse_category(category);
  if (!c) throw SchemaError("category", "unknown error category '" + category + "'");
  s.category = *c;
  const auto severity = require_string(j, "severity");
  const auto sev = parse_severity(severity);
  if (!sev) throw SchemaError("severity", "unknown severity '" + severity + "'");
  s.severity = *sev;
  require(j, "source_start");
  require(j, "source_end");
  s.source_start = optional_index(j, "source_start");
  s.source_end = optional_index(j, "source_end");
  s.translation_start = required_index(j, "translation_start");
  s.translation_end = required_index(j, "translation_end");
  s.explanation = require_string(j, "explanation");
  const auto provenance = require_string(j, "provenance");
  const auto p = parse_provenance(provenance);
  if (!p) throw SchemaError("provenance", "unknown provenance '" + provenance + "'");
  s.provenance = *p;
  return s;
}

ExportRecord record_from_json(const Json& j) {
  using namespace json_field;
  ExportRecord r;
  r.pair_id = require_string(j, "pair_id");
  r.source_lang = require_string(j, "source_lang");
  r.target_lang = require_string(j, "target_lang");
  r.source_text = require_string(j, "source_text");
  r.mt_text = require_string(j, "mt_text");
  r.corrected_text = require_string(j, "corrected_text");
  r.annotator_id = require_string(j, "annotator_id");
  require(j, "overall_score");
  if (const auto score = optional_integer(j, "overall_score")) {
    if (*score < -1000000 || *score > 1000000) {
      throw SchemaError("overall_score", "overall_score out of range");
    }
    r.overall_score = static_cast<int>(*score);
  }
  const Json& spans = require(j, "spans");
  if (!spans.is_array()) throw SchemaError("spans", "field 'spans' must be an array");
  for (const auto& s : spans) r.spans.push_back(span_from_json(s));
  return r;
}

std::string optional_cell(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void validate_all(const std::vector<ExportRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto violations = validate_record(records[i]);
    if (!violations.empty()) throw RecordValidationError(i, std::move(violations));
  }
}

}  // namespace

VersionError::VersionError(std::string found)
    : Error(ErrorCode::kVersion, "unsupported format_version '" + found + "' (expected '" +
                                     std::string(kFormatVersion) + "')"),
      found_(std::move(found)) {}

RecordValidationError::RecordValidationError(std::size_t record_index, ValidationReport violations)
    : ValidationError(violations, record_message(record_index, violations)),
      record_index_(record_index) {}

ExportRecord make_record(const TranslationPair& pair, const Annotation& annotation) {
  ExportRecord r;
  r.pair_id = pair.pair_id;
  r.source_lang = pair.source_lang;
  r.target_lang = pair.target_lang;
  r.source_text = pair.source_text;
  r.mt_text = pair.mt_text;
  r.corrected_text = annotation.corrected_text;
  r.annotator_id = annotation.annotator_id;
  r.overall_score = annotation.overall_score;
  for (const auto& s : annotation.spans) {
    ExportSpan e;
    e.category = s.category;
    e.severity = s.severity;
    if (s.source_range) {
      e.source_start = s.source_range->start;
      e.source_end = s.source_range->end;
    }
    e.translation_start = s.translation_range.start;
    e.translation_end = s.translation_range.end;
    e.explanation = s.explanation;
    e.provenance = s.provenance;
    r.spans.push_back(std::move(e));
  }
  return r;
}

ValidationReport validate_record(const ExportRecord& record) {
  ValidationReport out;
  for (const auto* text : {&record.source_text, &record.mt_text, &record.corrected_text,
                           &record.pair_id, &record.annotator_id}) {
    if (!is_valid_utf8(*text)) {
      out.push_back({{}, std::string(rules::kInvalidUtf8), {}, "record text is not valid UTF-8"});
      return out;
    }
  }
  if (record.source_text.empty() || record.mt_text.empty()) {
    out.push_back({{}, "empty_text", {}, "source_text and mt_text must be non-empty"});
  }

  TranslationPair pair;
  pair.pair_id = record.pair_id;
  pair.source_text = record.source_text;
  pair.mt_text = record.mt_text;

  Annotation annotation;
  annotation.pair_id = record.pair_id;
  annotation.corrected_text = record.corrected_text;
  annotation.overall_score = record.overall_score;
  for (std::size_t i = 0; i < record.spans.size(); ++i) {
    const auto& e = record.spans[i];
    ErrorSpan s;
    s.span_id = "spans[" + std::to_string(i) + "]";
    s.category = e.category;
    s.severity = e.severity;
    if (e.source_start.has_value() != e.source_end.has_value()) {
      out.push_back({{s.span_id}, "partial_source_range", {},
                     "source_start and source_end must both be set or both be null"});
    } else if (e.source_start) {
      s.source_range = CharRange{*e.source_start, *e.source_end};
    }
    s.translation_range = {e.translation_start, e.translation_end};
    s.provenance = e.provenance;
    annotation.spans.push_back(std::move(s));
  }
  auto more = validate_annotation(annotation, pair);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

std::string to_json(const std::vector<ExportRecord>& records) {
  validate_all(records);
  Json doc = Json::object();
  doc["format_version"] = kFormatVersion;
  doc["span_unit"] = kSpanUnit;
  Json list = Json::array();
  for (const auto& r : records) list.push_back(record_to_json(r));
  doc["records"] = std::move(list);
  return dump_json(doc);
}

std::vector<std::vector<std::string>> flatten(const std::vector<ExportRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : records) {
    std::vector<std::string> base = {
        r.pair_id,        r.source_lang,  r.target_lang,
        r.source_text,    r.mt_text,      r.corrected_text,
        r.annotator_id,   r.overall_score ? std::to_string(*r.overall_score) : std::string(),
    };
    if (r.spans.empty()) {
      auto row = base;
      row.resize(16);
      rows.push_back(std::move(row));
      continue;
    }
    for (const auto& s : r.spans) {
      auto row = base;
      row.emplace_back(to_string(s.category));
      row.emplace_back(to_string(s.severity));
      row.push_back(optional_cell(s.source_start));
      row.push_back(optional_cell(s.source_end));
      row.push_back(std::to_string(s.translation_start));
      row.push_back(std::to_string(s.translation_end));
      row.push_back(s.explanation);
      row.emplace_back(to_string(s.provenance));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ExportRecord>& records) {
  validate_all(records);
  std::string out;
  out += kCsvHeader;
  out += "\r\n";
  for (const auto& row : flatten(records)) csv::append_row(out, row);
  return out;
}

std::vector<ExportRecord> from_json(std::string_view document) {
  const Json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("format_version", "export document must be an object");
  const Json& version = json_field::require(doc, "format_version");
  if (!version.is_string()) throw VersionError(version.dump());
  if (version.get<std::string>() != kFormatVersion) throw VersionError(version.get<std::string>());
  if (const auto unit = json_field::optional_string(doc, "span_unit"); unit && *unit != kSpanUnit) {
    throw SchemaError("span_unit", "unsupported span_unit '" + *unit + "'");
  }
  const Json& list = json_field::require(doc, "records");
  if (!list.is_array()) throw SchemaError("records", "field 'records' must be an array");
  std::vector<ExportRecord> records;
  records.reserve(list.size());
  for (const auto& item : list) records.push_back(record_from_json(item));
  validate_all(records);
  return records;
}

}  // namespace postedit::exporter
