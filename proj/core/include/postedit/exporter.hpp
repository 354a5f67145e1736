#pragma once

// ESA/MQM-style dataset export. Translation indices refer to corrected_text;
// all indices are Unicode code points.

#include <optional>
#include <string>
#include <vector>

#include "postedit/spans.hpp"
#include "postedit/types.hpp"

namespace postedit::exporter {

inline constexpr std::string_view kFormatVersion = "1.0";
inline constexpr std::string_view kSpanUnit = "unicode_code_point";

/// Header row of the CSV export, in column order.
inline constexpr std::string_view kCsvHeader =
    "pair_id,source_lang,target_lang,source_text,mt_text,corrected_text,annotator_id,"
    "overall_score,category,severity,source_start,source_end,translation_start,"
    "translation_end,explanation,provenance";

struct ExportSpan {
  ErrorCategory category = ErrorCategory::kMistranslation;
  Severity severity = Severity::kMinor;
  std::optional<std::size_t> source_start;
  std::optional<std::size_t> source_end;
  std::size_t translation_start = 0;
  std::size_t translation_end = 0;
  std::string explanation;
  Provenance provenance = Provenance::kHuman;

  friend bool operator==(const ExportSpan&, const ExportSpan&) = default;
};

struct ExportRecord {
  std::string pair_id;
  std::string source_lang;
  std::string target_lang;
  std::string source_text;
  std::string mt_text;
  std::string corrected_text;
  std::string annotator_id;
  std::optional<int> overall_score;
  std::vector<ExportSpan> spans;

  friend bool operator==(const ExportRecord&, const ExportRecord&) = default;
};

class VersionError : public Error {
 public:
  explicit VersionError(std::string found);

  const std::string& found() const noexcept { return found_; }

 private:
  std::string found_;
};

/// Validation failure on one record of a batch.
class RecordValidationError : public ValidationError {
 public:
  RecordValidationError(std::size_t record_index, ValidationReport violations);

  std::size_t record_index() const noexcept { return record_index_; }

 private:
  std::size_t record_index_;
};

ExportRecord make_record(const TranslationPair& pair, const Annotation& annotation);

/// Violations of the span invariants for one record, relative to its texts.
ValidationReport validate_record(const ExportRecord& record);

/// {"format_version":"1.0","span_unit":"unicode_code_point","records":[...]}
/// Compact, key order fixed, UTF-8 preserved. Throws RecordValidationError.
std::string to_json(const std::vector<ExportRecord>& records);

/// One row per span (CRLF terminated); a record without spans yields one row
/// with the eight span columns empty. Throws RecordValidationError.
std::string to_csv(const std::vector<ExportRecord>& records);

/// Inverse of to_json. Throws ParseError, SchemaError, VersionError or
/// RecordValidationError.
std::vector<ExportRecord> from_json(std::string_view document);

/// The flattened field values to_csv emits, header excluded. Exposed so
/// callers can compare against any RFC 4180 reader.
std::vector<std::vector<std::string>> flatten(const std::vector<ExportRecord>& records);

}  // namespace postedit::exporter
