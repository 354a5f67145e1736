#include "postedit/service/store.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace postedit::service {

namespace {

constexpr std::string_view kStoreFormat = "postedit-store";
constexpr int kStoreVersion = 1;

template <typename Map>
bool deep_equal(const Map& a, const Map& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (!(*ia->second == *ib->second)) return false;
  }
  return true;
}

}  // namespace

Json to_json(const detection::SanitizationReport& r) {
  Json j = Json::object();
  j["accepted"] = r.accepted;
  j["relocated"] = r.relocated;
  j["clamped"] = r.clamped;
  Json dropped = Json::array();
  for (const auto& d : r.dropped) {
    Json e = Json::object();
    e["index"] = d.index;
    e["reason"] = d.reason;
    dropped.push_back(std::move(e));
  }
  j["dropped"] = std::move(dropped);
  return j;
}

detection::SanitizationReport report_from_json(const Json& j) {
  using namespace json_field;
  detection::SanitizationReport r;
  r.accepted = static_cast<std::size_t>(require_integer(j, "accepted"));
  r.relocated = static_cast<std::size_t>(require_integer(j, "relocated"));
  r.clamped = static_cast<std::size_t>(require_integer(j, "clamped"));
  for (const auto& d : require(j, "dropped")) {
    r.dropped.push_back({static_cast<std::size_t>(require_integer(d, "index")),
                         require_string(d, "reason")});
  }
  return r;
}

bool StoreState::equals(const StoreState& other) const {
  return datasets == other.datasets && deep_equal(pairs, other.pairs) &&
         deep_equal(annotations, other.annotations) && deep_equal(detections, other.detections);
}

std::string pair_content_hash(const TranslationPair& pair) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&](std::string_view field) {
    for (const char c : field) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    // field separator outside the UTF-8 byte range
    h ^= 0xFF;
    h *= 1099511628211ULL;
  };
  mix(pair.pair_id);
  mix(pair.dataset_id);
  mix(pair.source_lang);
  mix(pair.target_lang);
  mix(pair.source_text);
  mix(pair.mt_text);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const StoreState& state) {
  Json doc = Json::object();
  doc["format"] = kStoreFormat;
  doc["version"] = kStoreVersion;
  Json pairs = Json::array();
  for (const auto& [id, pair] : state.pairs) pairs.push_back(postedit::to_json(*pair));
  doc["pairs"] = std::move(pairs);
  Json annotations = Json::array();
  for (const auto& [id, stored] : state.annotations) {
    Json j = Json::object();
    j["pair_hash"] = stored->pair_hash;
    j["annotation"] = postedit::to_json(stored->annotation);
    annotations.push_back(std::move(j));
  }
  doc["annotations"] = std::move(annotations);
  Json detections = Json::array();
  for (const auto& [key, cached] : state.detections) {
    Json j = Json::object();
    j["pair_id"] = key.first;
    j["engine_id"] = key.second;
    Json spans = Json::array();
    for (const auto& s : cached->spans) spans.push_back(postedit::to_json(s));
    j["spans"] = std::move(spans);
    j["report"] = to_json(cached->report);
    detections.push_back(std::move(j));
  }
  doc["detections"] = std::move(detections);
  return doc;
}

StoreState state_from_json(const Json& doc) {
  using namespace json_field;
  if (require_string(doc, "format") != kStoreFormat) {
    throw SchemaError("format", "not a postedit store file");
  }
  if (require_integer(doc, "version") != kStoreVersion) {
    throw SchemaError("version", "unsupported store version");
  }
  StoreState state;
  for (const auto& j : require(doc, "pairs")) {
    auto pair = std::make_shared<TranslationPair>(pair_from_json(j));
    state.datasets[pair->dataset_id].insert(pair->pair_id);
    state.pairs.emplace(pair->pair_id, std::move(pair));
  }
  for (const auto& j : require(doc, "annotations")) {
    auto stored = std::make_shared<StoredAnnotationDoc>();
    stored->pair_hash = require_string(j, "pair_hash");
    stored->annotation = annotation_from_json(require(j, "annotation"));
    state.annotations.emplace(stored->annotation.pair_id, std::move(stored));
  }
  for (const auto& j : require(doc, "detections")) {
    auto cached = std::make_shared<CachedDetection>();
    for (const auto& s : require(j, "spans")) cached->spans.push_back(span_from_json(s));
    cached->report = report_from_json(require(j, "report"));
    state.detections.emplace(DetectionKey{require_string(j, "pair_id"), require_string(j, "engine_id")},
                             std::move(cached));
  }
  return state;
}

Store::Store() : state_(std::make_shared<const StoreState>()) {}

Store::Store(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    state_ = std::make_shared<const StoreState>();
    return;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  state_ = std::make_shared<const StoreState>(state_from_json(parse_json(buffer.str())));
}

std::shared_ptr<const StoreState> Store::snapshot() const {
  std::lock_guard lock(publish_mutex_);
  return state_;
}

void Store::commit(const std::function<void(StoreState&)>& mutate) {
  std::lock_guard writer(write_mutex_);
  auto next = std::make_shared<StoreState>(*snapshot());
  mutate(*next);
  if (persistent()) persist(*next);
  std::lock_guard lock(publish_mutex_);
  state_ = std::move(next);
}

void Store::persist(const StoreState& state) const {
  namespace fs = std::filesystem;
  const fs::path target(path_);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write store file '" + temp.string() + "'");
    out << dump_json(to_json(state)) << '\n';
    out.flush();
    if (!out) throw IoError("short write to store file '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) throw IoError("cannot replace store file '" + path_ + "': " + ec.message());
}

}  // namespace postedit::service
