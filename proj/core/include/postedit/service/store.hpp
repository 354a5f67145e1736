#pragma once

// Document store for pairs, annotations and cached detection results.
//
// Readers take an immutable snapshot (a shared_ptr to const state) and never
// block writers. Writers are serialized: commit() copies the current state,
// applies the mutation, persists it (file backend) and only then publishes
// the new snapshot, so a failed write leaves nothing behind.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "postedit/detection/sanitize.hpp"
#include "postedit/json_codec.hpp"
#include "postedit/types.hpp"

namespace postedit::service {

struct StoredAnnotationDoc {
  Annotation annotation;
  /// Hash of the pair content the annotation was validated against.
  std::string pair_hash;

  friend bool operator==(const StoredAnnotationDoc&, const StoredAnnotationDoc&) = default;
};

struct CachedDetection {
  std::vector<ErrorSpan> spans;
  detection::SanitizationReport report;

  friend bool operator==(const CachedDetection&, const CachedDetection&) = default;
};

using DetectionKey = std::pair<std::string, std::string>;  // (pair_id, engine_id)

struct StoreState {
  std::map<std::string, std::shared_ptr<const TranslationPair>> pairs;
  std::map<std::string, std::set<std::string>> datasets;  // dataset_id -> pair ids
  std::map<std::string, std::shared_ptr<const StoredAnnotationDoc>> annotations;
  std::map<DetectionKey, std::shared_ptr<const CachedDetection>> detections;

  /// Deep equality (pointed-to values, not pointers).
  bool equals(const StoreState& other) const;
};

/// Stable 64-bit FNV-1a digest (hex) of the pair's immutable content.
std::string pair_content_hash(const TranslationPair& pair);

Json to_json(const detection::SanitizationReport& report);
detection::SanitizationReport report_from_json(const Json& j);

Json to_json(const StoreState& state);
StoreState state_from_json(const Json& doc);

class Store {
 public:
  /// In-memory store.
  Store();
  /// File-backed store; loads `path` when it exists.
  explicit Store(std::string path);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  std::shared_ptr<const StoreState> snapshot() const;

  /// Apply `mutate` to a private copy of the state and publish it. Anything
  /// `mutate` throws propagates and the store is left untouched.
  void commit(const std::function<void(StoreState&)>& mutate);

  bool persistent() const noexcept { return !path_.empty(); }
  const std::string& path() const noexcept { return path_; }

 private:
  void persist(const StoreState& state) const;

  std::string path_;
  mutable std::mutex publish_mutex_;  // guards the snapshot pointer only
  std::mutex write_mutex_;            // serializes commits
  std::shared_ptr<const StoreState> state_;
};

}  // namespace postedit::service
