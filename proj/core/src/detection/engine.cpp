#include "postedit/detection/engine.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "postedit/detection/prompt.hpp"
#include "postedit/json_codec.hpp"

namespace postedit::detection {

std::string_view to_string(EngineKind kind) noexcept {
  switch (kind) {
    case EngineKind::kStub: return "stub";
    case EngineKind::kLlm: return "llm";
    case EngineKind::kXcomet: return "xcomet";
  }
  return "";
}

std::optional<EngineKind> parse_engine_kind(std::string_view text) noexcept {
  for (const auto k : {EngineKind::kStub, EngineKind::kLlm, EngineKind::kXcomet}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

void validate_config(const EngineConfig& config) {
  if (config.engine_id.empty()) throw ConfigError("engine_id must be non-empty");
  const std::string where = "engine '" + config.engine_id + "': ";
  if (!(config.timeout_seconds > 0.0)) throw ConfigError(where + "timeout must be > 0");
  if (config.max_retries < 0) throw ConfigError(where + "max_retries must be >= 0");
  if (config.backoff_base_ms < 0) throw ConfigError(where + "backoff_base_ms must be >= 0");
  if (config.max_in_flight < 0) throw ConfigError(where + "max_in_flight must be >= 0");
  if (config.kind != EngineKind::kStub && config.endpoint.empty()) {
    throw ConfigError(where + "endpoint is required");
  }
  if (config.kind == EngineKind::kLlm && config.model.empty()) {
    throw ConfigError(where + "model is required for llm engines");
  }
}

EngineUnavailableError::EngineUnavailableError(const std::string& engine_id,
                                               const std::string& detail)
    : Error(ErrorCode::kEngineUnavailable, "engine '" + engine_id + "' unavailable: " + detail) {}

EngineError::EngineError(const std::string& engine_id, int status, std::string body)
    : Error(ErrorCode::kEngineError,
            "engine '" + engine_id + "' returned HTTP " + std::to_string(status)),
      status_(status),
      body_(std::move(body)) {}

DetectionFormatError::DetectionFormatError(const std::string& engine_id, const std::string& detail,
                                           std::string raw_body)
    : Error(ErrorCode::kDetectionFormat,
            "engine '" + engine_id + "' returned an unusable body: " + detail),
      raw_body_(std::move(raw_body)) {}

// ---------------------------------------------------------------------------
// Stub

StubEngine::StubEngine(std::string engine_id) : id_(std::move(engine_id)) {}

std::vector<RawDetectedSpan> StubEngine::propose(const TranslationPair& pair) {
  std::vector<RawDetectedSpan> out;
  std::set<std::string> seen;
  const std::string_view source = pair.source_text;

  std::size_t pos = 0;
  std::size_t cp = 0;
  std::size_t token_byte = 0;
  std::size_t token_cp = 0;
  bool in_token = false;

  const auto flush = [&](std::size_t end_byte, std::size_t end_cp) {
    if (!in_token) return;
    in_token = false;
    if (end_cp - token_cp < kMinTokenLength) return;
    std::string token(source.substr(token_byte, end_byte - token_byte));
    if (!seen.insert(token).second) return;
    const auto hit = find_code_points(pair.mt_text, token);
    if (!hit) return;
    RawDetectedSpan s;
    s.original_text = token;
    s.error_type = "Untranslated";
    s.error_severity = "Minor";
    s.start_index_orig = static_cast<std::int64_t>(token_cp);
    s.end_index_orig = static_cast<std::int64_t>(end_cp);
    s.start_index_translation = static_cast<std::int64_t>(*hit);
    s.end_index_translation = static_cast<std::int64_t>(*hit + (end_cp - token_cp));
    s.correct_text = "'" + token + "' is copied from the source without translation.";
    out.push_back(std::move(s));
  };

  while (pos < source.size()) {
    const std::size_t at = pos;
    const char32_t c = decode_next(source, pos);
    if (is_unicode_whitespace(c)) {
      flush(at, cp);
    } else if (!in_token) {
      in_token = true;
      token_byte = at;
      token_cp = cp;
    }
    ++cp;
  }
  flush(source.size(), cp);
  return out;
}

SanitizedSpans StubEngine::detect(const TranslationPair& pair) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  return sanitize_spans(propose(pair), pair);
}

EngineMetrics StubEngine::metrics() const noexcept {
  return {calls_.load(std::memory_order_relaxed), 0, 0};
}

// ---------------------------------------------------------------------------
// Remote engines

RemoteEngine::RemoteEngine(EngineConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_default_transport()) {
  validate_config(config_);
  if (config_.max_in_flight > 0) {
    in_flight_ = std::make_unique<std::counting_semaphore<>>(config_.max_in_flight);
  }
}

std::optional<std::string> RemoteEngine::credential() const {
  if (config_.credential_env.empty()) return std::nullopt;
  const char* value = std::getenv(config_.credential_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw EngineUnavailableError(config_.engine_id, "credential variable " +
                                                        config_.credential_env + " is not set");
  }
  return std::string(value);
}

namespace {

bool transient(int status) { return status == 408 || status == 429 || status >= 500; }

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>* sem) : sem_(sem) {
    if (sem_) sem_->acquire();
  }
  ~InFlightSlot() {
    if (sem_) sem_->release();
  }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>* sem_;
};

}  // namespace

HttpResponse RemoteEngine::post_with_retries(const HttpRequest& request) const {
  std::optional<HttpResponse> last_response;
  std::string last_failure;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = static_cast<long long>(config_.backoff_base_ms) * (1LL << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    attempts_.fetch_add(1, std::memory_order_relaxed);
    try {
      HttpResponse response = transport_->post(request);
      if (!transient(response.status)) return response;
      last_response = std::move(response);
      last_failure.clear();
    } catch (const TransportError& e) {
      last_response.reset();
      last_failure = e.what();
    }
  }
  if (last_response) return *last_response;
  throw EngineUnavailableError(config_.engine_id,
                               last_failure + " (after " +
                                   std::to_string(config_.max_retries + 1) + " attempt(s))");
}

SanitizedSpans RemoteEngine::detect(const TranslationPair& pair) const {
  calls_.fetch_add(1, std::memory_order_relaxed);
  try {
    InFlightSlot slot(in_flight_.get());
    const HttpResponse response = post_with_retries(build_request(pair));
    if (response.status < 200 || response.status >= 300) {
      throw EngineError(config_.engine_id, response.status, response.body);
    }
    std::vector<RawDetectedSpan> raw;
    try {
      raw = parse_ec1_response(extract_payload(response.body));
    } catch (const DetectionFormatError&) {
      throw;
    } catch (const Error& e) {
      throw DetectionFormatError(config_.engine_id, e.what(), response.body);
    }
    return sanitize_spans(raw, pair);
  } catch (...) {
    failures_.fetch_add(1, std::memory_order_relaxed);
    throw;
  }
}

EngineMetrics RemoteEngine::metrics() const noexcept {
  return {calls_.load(std::memory_order_relaxed), attempts_.load(std::memory_order_relaxed),
          failures_.load(std::memory_order_relaxed)};
}

namespace {

std::chrono::milliseconds timeout_of(const EngineConfig& c) {
  return std::chrono::milliseconds(static_cast<long long>(std::llround(c.timeout_seconds * 1000.0)));
}

}  // namespace

HttpRequest LlmEngine::build_request(const TranslationPair& pair) const {
  HttpRequest req;
  req.url = config().endpoint;
  req.timeout = timeout_of(config());
  req.headers["Content-Type"] = "application/json";
  if (const auto key = credential()) req.headers["Authorization"] = "Bearer " + *key;

  Json body = Json::object();
  body["model"] = config().model;
  Json messages = Json::array();
  messages.push_back({{"role", "system"}, {"content", ec1_system_message()}});
  messages.push_back({{"role", "user"}, {"content", build_ec1_prompt(pair)}});
  body["messages"] = std::move(messages);
  body["temperature"] = 0;
  body["response_format"] = {{"type", "json_object"}};
  req.body = dump_json(body);
  return req;
}

std::string LlmEngine::extract_payload(const std::string& body) const {
  Json doc;
  try {
    doc = parse_json(body);
  } catch (const ParseError& e) {
    throw DetectionFormatError(id(), e.what(), body);
  }
  // Bodies that already carry the wire schema are accepted as-is.
  if (doc.is_object() && doc.contains("error_spans")) return body;
  const auto choices = doc.find("choices");
  if (choices == doc.end() || !choices->is_array() || choices->empty()) {
    throw DetectionFormatError(id(), "missing choices[0]", body);
  }
  const auto& first = (*choices)[0];
  const auto message = first.find("message");
  if (message == first.end() || !message->is_object()) {
    throw DetectionFormatError(id(), "missing choices[0].message", body);
  }
  const auto content = message->find("content");
  if (content == message->end() || !content->is_string()) {
    throw DetectionFormatError(id(), "missing choices[0].message.content", body);
  }
  return std::string(strip_code_fence(content->get<std::string>()));
}

HttpRequest XcometEngine::build_request(const TranslationPair& pair) const {
  HttpRequest req;
  req.url = config().endpoint;
  req.timeout = timeout_of(config());
  req.headers["Content-Type"] = "application/json";
  if (const auto key = credential()) req.headers["Authorization"] = "Bearer " + *key;
  Json body = Json::object();
  body["source_lang"] = pair.source_lang;
  body["target_lang"] = pair.target_lang;
  body["source"] = pair.source_text;
  body["translation"] = pair.mt_text;
  req.body = dump_json(body);
  return req;
}

std::string XcometEngine::extract_payload(const std::string& body) const { return body; }

std::unique_ptr<DetectionEngine> make_engine(const EngineConfig& config,
                                             std::shared_ptr<HttpTransport> transport) {
  validate_config(config);
  switch (config.kind) {
    case EngineKind::kStub: return std::make_unique<StubEngine>(config.engine_id);
    case EngineKind::kLlm: return std::make_unique<LlmEngine>(config, std::move(transport));
    case EngineKind::kXcomet: return std::make_unique<XcometEngine>(config, std::move(transport));
  }
  throw ConfigError("unknown engine kind");
}

// ---------------------------------------------------------------------------
// Registry

void EngineRegistry::add(std::shared_ptr<DetectionEngine> engine) {
  const std::string id = engine->id();
  if (!engines_.emplace(id, std::move(engine)).second) {
    throw ConfigError("duplicate engine id '" + id + "'");
  }
}

std::shared_ptr<DetectionEngine> EngineRegistry::find(std::string_view engine_id) const {
  const auto it = engines_.find(engine_id);
  return it == engines_.end() ? nullptr : it->second;
}

std::vector<std::string> EngineRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : engines_) out.push_back(id);
  return out;
}

SanitizedSpans EngineRegistry::detect(const DetectionRequest& request) const {
  const auto engine = find(request.engine_id);
  if (!engine) {
    std::string valid;
    for (const auto& id : ids()) valid += (valid.empty() ? "" : ", ") + id;
    throw BadRequestError("unknown engine '" + request.engine_id + "'; valid engines: " + valid);
  }
  return engine->detect(request.pair);
}

}  // namespace postedit::detection
