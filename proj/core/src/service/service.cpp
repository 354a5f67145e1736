#include "postedit/service/service.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "postedit/exporter.hpp"

namespace postedit::service {

ConflictError::ConflictError(const std::string& what, std::uint64_t current_version,
                             std::vector<std::string> ids)
    : Error(ErrorCode::kConflict, what), current_version_(current_version), ids_(std::move(ids)) {}

namespace {

TimestampMs system_now() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

Violation pair_violation(const std::string& pair_id, std::string_view rule, std::string message) {
  return {{pair_id}, std::string(rule), {}, std::move(message)};
}

std::shared_ptr<const TranslationPair> find_pair(const StoreState& state, const std::string& pair_id) {
  const auto it = state.pairs.find(pair_id);
  if (it == state.pairs.end()) throw NotFoundError("unknown pair '" + pair_id + "'");
  return it->second;
}

const std::set<std::string>& find_dataset(const StoreState& state, const std::string& dataset_id) {
  const auto it = state.datasets.find(dataset_id);
  if (it == state.datasets.end()) throw NotFoundError("unknown dataset '" + dataset_id + "'");
  return it->second;
}

bool has_detection(const StoreState& state, const std::string& pair_id) {
  const auto it = state.detections.lower_bound({pair_id, std::string()});
  return it != state.detections.end() && it->first.first == pair_id;
}

void set_status(StoreState& state, const std::string& pair_id, PairStatus status) {
  auto& slot = state.pairs.at(pair_id);
  if (slot->status == status) return;
  auto updated = std::make_shared<TranslationPair>(*slot);
  updated->status = status;
  slot = std::move(updated);
}

}  // namespace

ValidationReport validate_pair(const TranslationPair& pair, std::string_view dataset_id) {
  ValidationReport report;
  const auto& id = pair.pair_id;
  if (id.empty()) report.push_back(pair_violation(id, pair_rules::kEmptyPairId, "pair_id is empty"));
  if (!pair.dataset_id.empty() && pair.dataset_id != dataset_id) {
    report.push_back(pair_violation(id, pair_rules::kDatasetMismatch,
                                    "pair names dataset '" + pair.dataset_id + "'"));
  }
  for (const auto* tag : {&pair.source_lang, &pair.target_lang}) {
    if (!is_language_tag(*tag)) {
      report.push_back(pair_violation(id, pair_rules::kInvalidLanguageTag, "invalid language tag '" + *tag + "'"));
    }
  }
  for (const auto& [field, text] : {std::pair{"source_text", &pair.source_text}, {"mt_text", &pair.mt_text}}) {
    if (!is_valid_utf8(*text)) {
      report.push_back(pair_violation(id, rules::kInvalidUtf8, std::string(field) + " is not valid UTF-8"));
    } else if (text->empty()) {
      report.push_back(pair_violation(id, pair_rules::kEmptyText, std::string(field) + " is empty"));
    }
  }
  return report;
}

ExportFormat parse_export_format(std::string_view text) {
  if (text == "json") return ExportFormat::kJson;
  if (text == "csv") return ExportFormat::kCsv;
  throw BadRequestError("unsupported export format '" + std::string(text) + "' (expected json or csv)");
}

Service::Service(std::shared_ptr<Store> store, std::shared_ptr<const detection::EngineRegistry> engines,
                 Clock clock)
    : store_(std::move(store)), engines_(std::move(engines)), clock_(std::move(clock)) {
  if (!store_) throw ConfigError("service requires a store");
  if (!engines_ || engines_->empty()) throw ConfigError("service requires at least one engine");
  if (!clock_) clock_ = system_now;
}

IngestResult Service::ingest_pairs(const std::string& dataset_id, std::vector<TranslationPair> pairs) {
  if (dataset_id.empty()) throw BadRequestError("dataset_id is empty");
  ValidationReport report;
  std::set<std::string> seen;
  for (auto& pair : pairs) {
    auto violations = validate_pair(pair, dataset_id);
    report.insert(report.end(), violations.begin(), violations.end());
    if (!pair.pair_id.empty() && !seen.insert(pair.pair_id).second) {
      report.push_back(pair_violation(pair.pair_id, pair_rules::kDuplicatePairId,
                                      "pair_id appears more than once in the request"));
    }
    pair.dataset_id = dataset_id;
    pair.status = PairStatus::kPending;
  }
  if (!report.empty()) throw ValidationError(std::move(report), "ingest rejected");

  IngestResult result;
  store_->commit([&](StoreState& state) {
    std::vector<std::string> conflicts;
    for (const auto& pair : pairs) {
      const auto it = state.pairs.find(pair.pair_id);
      if (it != state.pairs.end() && !it->second->same_content(pair)) conflicts.push_back(pair.pair_id);
    }
    if (!conflicts.empty()) {
      throw ConflictError("pair ids already stored with different content", 0, std::move(conflicts));
    }
    result = {};
    for (const auto& pair : pairs) {
      if (state.pairs.count(pair.pair_id) != 0) {
        ++result.unchanged;
        continue;
      }
      state.pairs.emplace(pair.pair_id, std::make_shared<const TranslationPair>(pair));
      state.datasets[dataset_id].insert(pair.pair_id);
      ++result.created;
    }
    // An empty request still makes the dataset known.
    state.datasets.try_emplace(dataset_id);
  });
  return result;
}

PairPage Service::list_pairs(const std::string& dataset_id, std::optional<PairStatus> status,
                             std::size_t page, std::size_t page_size) const {
  if (page < 1) throw BadRequestError("page must be at least 1");
  if (page_size < 1 || page_size > kMaxPageSize) {
    throw BadRequestError("page_size must be in [1, " + std::to_string(kMaxPageSize) + "]");
  }
  const auto state = store_->snapshot();
  const auto& ids = find_dataset(*state, dataset_id);

  std::vector<PairSummary> matching;
  for (const auto& id : ids) {
    const auto& pair = *state->pairs.at(id);
    if (status && pair.status != *status) continue;
    PairSummary s{pair.pair_id, pair.source_lang, pair.target_lang, pair.status, has_detection(*state, id), 0};
    if (const auto a = state->annotations.find(id); a != state->annotations.end()) {
      s.annotation_version = a->second->annotation.version;
    }
    matching.push_back(std::move(s));
  }

  PairPage out;
  out.page = page;
  out.page_size = page_size;
  out.total = matching.size();
  out.total_pages = (matching.size() + page_size - 1) / page_size;
  const auto first = (page - 1) * page_size;
  if (first < matching.size()) {
    const auto last = std::min(matching.size(), first + page_size);
    out.items.assign(std::make_move_iterator(matching.begin() + static_cast<std::ptrdiff_t>(first)),
                     std::make_move_iterator(matching.begin() + static_cast<std::ptrdiff_t>(last)));
  }
  return out;
}

PairView Service::get_pair(const std::string& pair_id) const {
  const auto state = store_->snapshot();
  PairView view{*find_pair(*state, pair_id), std::nullopt, {}};
  if (const auto a = state->annotations.find(pair_id); a != state->annotations.end()) {
    view.annotation = a->second->annotation;
  }
  for (auto it = state->detections.lower_bound({pair_id, std::string()});
       it != state->detections.end() && it->first.first == pair_id; ++it) {
    view.detected_by.push_back(it->first.second);
  }
  return view;
}

DetectionOutcome Service::run_detection(const std::string& pair_id, const std::string& engine_id, bool force) {
  std::string engine = engine_id;
  if (engine.empty()) {
    const auto ids = engines_->ids();
    if (ids.size() != 1) throw BadRequestError("engine is required when more than one is configured");
    engine = ids.front();
  }
  if (!engines_->find(engine)) {
    std::string known;
    for (const auto& id : engines_->ids()) known += (known.empty() ? "" : ", ") + id;
    throw BadRequestError("unknown engine '" + engine + "'; valid engines: " + known);
  }

  const auto state = store_->snapshot();
  const auto pair = find_pair(*state, pair_id);
  DetectionOutcome out{pair_id, engine, {}, {}, false, pair->status};
  if (!force) {
    if (const auto it = state->detections.find({pair_id, engine}); it != state->detections.end()) {
      out.spans = it->second->spans;
      out.report = it->second->report;
      out.cached = true;
      return out;
    }
  }

  // The upstream call runs outside the write lock.
  auto result = engines_->detect({*pair, engine});
  auto cached = std::make_shared<const CachedDetection>(CachedDetection{result.spans, result.report});
  store_->commit([&](StoreState& next) {
    const auto current = find_pair(next, pair_id);
    if (!current->same_content(*pair)) throw ConflictError("pair changed during detection", 0, {pair_id});
    next.detections[{pair_id, engine}] = cached;
    if (current->status == PairStatus::kPending) set_status(next, pair_id, PairStatus::kInProgress);
    out.status = next.pairs.at(pair_id)->status;
  });
  out.spans = std::move(result.spans);
  out.report = std::move(result.report);
  return out;
}

Annotation Service::submit_annotation(const std::string& pair_id, Annotation annotation,
                                      std::uint64_t expected_version) {
  if (annotation.pair_id.empty()) annotation.pair_id = pair_id;
  if (annotation.pair_id != pair_id) {
    throw BadRequestError("annotation pair_id '" + annotation.pair_id + "' does not match '" + pair_id + "'");
  }
  if (annotation.annotator_id.empty()) throw BadRequestError("annotator_id is required");

  Annotation stored;
  store_->commit([&](StoreState& state) {
    const auto pair = find_pair(state, pair_id);
    const auto existing = state.annotations.find(pair_id);
    const std::uint64_t current = existing == state.annotations.end() ? 0 : existing->second->annotation.version;
    if (expected_version != current) {
      throw ConflictError("annotation version is " + std::to_string(current) + ", expected " +
                              std::to_string(expected_version),
                          current, {pair_id});
    }
    auto report = validate_annotation(annotation, *pair);
    if (!report.empty()) throw ValidationError(std::move(report), "annotation rejected");

    const auto now = clock_();
    annotation.version = current + 1;
    annotation.created_at = existing == state.annotations.end() ? now : existing->second->annotation.created_at;
    annotation.updated_at = now;
    state.annotations[pair_id] =
        std::make_shared<const StoredAnnotationDoc>(StoredAnnotationDoc{annotation, pair_content_hash(*pair)});
    set_status(state, pair_id, PairStatus::kCompleted);
    stored = annotation;
  });
  return stored;
}

std::string Service::export_dataset(const std::string& dataset_id, ExportFormat format) const {
  const auto state = store_->snapshot();
  std::vector<exporter::ExportRecord> records;
  for (const auto& id : find_dataset(*state, dataset_id)) {
    const auto& pair = *state->pairs.at(id);
    if (pair.status != PairStatus::kCompleted) continue;
    const auto a = state->annotations.find(id);
    if (a == state->annotations.end()) continue;
    records.push_back(exporter::make_record(pair, a->second->annotation));
  }
  return format == ExportFormat::kJson ? exporter::to_json(records) : exporter::to_csv(records);
}

std::vector<AuditFinding> Service::audit() const {
  const auto state = store_->snapshot();
  std::vector<AuditFinding> findings;
  for (const auto& [id, doc] : state->annotations) {
    const auto p = state->pairs.find(id);
    if (p == state->pairs.end()) {
      findings.push_back({id, "annotation without a stored pair", {}});
      continue;
    }
    if (doc->pair_hash != pair_content_hash(*p->second)) {
      findings.push_back({id, "pair content changed under the annotation", {}});
    }
    if (auto report = validate_annotation(doc->annotation, *p->second); !report.empty()) {
      findings.push_back({id, "annotation fails validation", std::move(report)});
    }
    if (p->second->status != PairStatus::kCompleted) {
      findings.push_back({id, "annotated pair is not completed", {}});
    }
  }
  return findings;
}

void Service::reset_pair(const std::string& pair_id) {
  store_->commit([&](StoreState& state) {
    find_pair(state, pair_id);
    state.annotations.erase(pair_id);
    set_status(state, pair_id, PairStatus::kPending);
  });
}

Json to_json(const PairSummary& s) {
  Json j = Json::object();
  j["pair_id"] = s.pair_id;
  j["source_lang"] = s.source_lang;
  j["target_lang"] = s.target_lang;
  j["status"] = to_string(s.status);
  j["has_detection"] = s.has_detection;
  j["annotation_version"] = s.annotation_version;
  return j;
}

Json to_json(const PairPage& page) {
  Json j = Json::object();
  Json items = Json::array();
  for (const auto& s : page.items) items.push_back(to_json(s));
  j["items"] = std::move(items);
  j["page"] = page.page;
  j["page_size"] = page.page_size;
  j["total"] = page.total;
  j["total_pages"] = page.total_pages;
  return j;
}

Json to_json(const PairView& view) {
  Json j = Json::object();
  j["pair"] = postedit::to_json(view.pair);
  j["annotation"] = view.annotation ? postedit::to_json(*view.annotation) : Json(nullptr);
  j["version"] = view.annotation ? view.annotation->version : 0;
  j["detected_by"] = view.detected_by;
  return j;
}

Json to_json(const DetectionOutcome& o) {
  Json j = Json::object();
  j["pair_id"] = o.pair_id;
  j["engine"] = o.engine_id;
  j["cached"] = o.cached;
  j["status"] = to_string(o.status);
  Json spans = Json::array();
  for (const auto& s : o.spans) spans.push_back(postedit::to_json(s));
  j["spans"] = std::move(spans);
  j["report"] = to_json(o.report);
  return j;
}

Json to_json(const AuditFinding& f) {
  Json j = Json::object();
  j["pair_id"] = f.pair_id;
  j["problem"] = f.problem;
  j["violations"] = postedit::to_json(f.violations);
  return j;
}

}  // namespace postedit::service
