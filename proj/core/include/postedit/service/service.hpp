#pragma once

// Annotation workflow over a Store: ingest, list, detect, submit, export.
// Thread-safe; every method may be called concurrently.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "postedit/detection/engine.hpp"
#include "postedit/service/store.hpp"
#include "postedit/spans.hpp"

namespace postedit::service {

/// Version mismatch on submit, or pair_id collision on ingest.
class ConflictError : public Error {
 public:
  ConflictError(const std::string& what, std::uint64_t current_version, std::vector<std::string> ids = {});

  std::uint64_t current_version() const noexcept { return current_version_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  std::uint64_t current_version_;
  std::vector<std::string> ids_;
};

class UnauthorizedError : public Error {
 public:
  explicit UnauthorizedError(const std::string& what) : Error(ErrorCode::kUnauthorized, what) {}
};

class ForbiddenError : public Error {
 public:
  explicit ForbiddenError(const std::string& what) : Error(ErrorCode::kForbidden, what) {}
};

class PreconditionRequiredError : public Error {
 public:
  explicit PreconditionRequiredError(const std::string& what)
      : Error(ErrorCode::kPreconditionRequired, what) {}
};

/// Rules reported for rejected pairs on ingest.
namespace pair_rules {
inline constexpr std::string_view kEmptyPairId = "empty_pair_id";
inline constexpr std::string_view kEmptyText = "empty_text";
inline constexpr std::string_view kInvalidLanguageTag = "invalid_language_tag";
inline constexpr std::string_view kDatasetMismatch = "dataset_mismatch";
inline constexpr std::string_view kDuplicatePairId = "duplicate_pair_id";
}  // namespace pair_rules

/// Violations for one incoming pair (span_ids carry the pair_id).
ValidationReport validate_pair(const TranslationPair& pair, std::string_view dataset_id);

struct IngestResult {
  std::size_t created = 0;
  std::size_t unchanged = 0;
};

struct PairSummary {
  std::string pair_id;
  std::string source_lang;
  std::string target_lang;
  PairStatus status = PairStatus::kPending;
  bool has_detection = false;
  std::uint64_t annotation_version = 0;
};

struct PairPage {
  std::vector<PairSummary> items;
  std::size_t page = 1;
  std::size_t page_size = 0;
  std::size_t total = 0;
  std::size_t total_pages = 0;
};

inline constexpr std::size_t kMaxPageSize = 500;
inline constexpr std::size_t kDefaultPageSize = 50;

struct PairView {
  TranslationPair pair;
  std::optional<Annotation> annotation;
  std::vector<std::string> detected_by;  // engine ids with a cached result
};

struct DetectionOutcome {
  std::string pair_id;
  std::string engine_id;
  std::vector<ErrorSpan> spans;
  detection::SanitizationReport report;
  bool cached = false;
  PairStatus status = PairStatus::kPending;
};

enum class ExportFormat { kJson, kCsv };

/// Throws BadRequestError for anything but "json" or "csv".
ExportFormat parse_export_format(std::string_view text);

struct AuditFinding {
  std::string pair_id;
  std::string problem;
  ValidationReport violations;
};

class Service {
 public:
  using Clock = std::function<TimestampMs()>;

  Service(std::shared_ptr<Store> store, std::shared_ptr<const detection::EngineRegistry> engines,
          Clock clock = {});

  /// All-or-nothing. Throws ValidationError (bad or duplicated pairs) or
  /// ConflictError listing ids already stored with different content.
  IngestResult ingest_pairs(const std::string& dataset_id, std::vector<TranslationPair> pairs);

  /// page is 1-based. Throws NotFoundError, BadRequestError.
  PairPage list_pairs(const std::string& dataset_id, std::optional<PairStatus> status,
                      std::size_t page, std::size_t page_size) const;

  PairView get_pair(const std::string& pair_id) const;

  /// An empty engine_id selects the only configured engine. Engine failures
  /// propagate and leave the pair untouched.
  DetectionOutcome run_detection(const std::string& pair_id, const std::string& engine_id, bool force);

  /// Compare-and-swap on the annotation version (0 before the first write).
  /// Returns the stored annotation. Throws NotFoundError, ConflictError,
  /// ValidationError, BadRequestError.
  Annotation submit_annotation(const std::string& pair_id, Annotation annotation,
                               std::uint64_t expected_version);

  std::string export_dataset(const std::string& dataset_id, ExportFormat format) const;

  /// Every stored annotation re-validated against its stored pair.
  std::vector<AuditFinding> audit() const;

  /// Drop the annotation and return the pair to pending. Cached detections
  /// are kept.
  void reset_pair(const std::string& pair_id);

  const detection::EngineRegistry& engines() const noexcept { return *engines_; }
  std::shared_ptr<const StoreState> snapshot() const { return store_->snapshot(); }

 private:
  std::shared_ptr<Store> store_;
  std::shared_ptr<const detection::EngineRegistry> engines_;
  Clock clock_;
};

Json to_json(const PairSummary& summary);
Json to_json(const PairPage& page);
Json to_json(const PairView& view);
Json to_json(const DetectionOutcome& outcome);
Json to_json(const AuditFinding& finding);

}  // namespace postedit::service
