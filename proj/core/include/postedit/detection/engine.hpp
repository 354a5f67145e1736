#pragma once

// Detection engines behind one interface: the deterministic stub, an
// OpenAI-compatible chat endpoint driven by the EC-1 prompt, and a sidecar
// adapter for span models (XCOMET) that already speak the wire schema.

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "postedit/detection/http_transport.hpp"
#include "postedit/detection/sanitize.hpp"
#include "postedit/types.hpp"

namespace postedit::detection {

enum class EngineKind { kStub, kLlm, kXcomet };

std::string_view to_string(EngineKind kind) noexcept;
std::optional<EngineKind> parse_engine_kind(std::string_view text) noexcept;

struct EngineConfig {
  std::string engine_id;
  EngineKind kind = EngineKind::kStub;
  std::string endpoint;
  std::string model;
  /// Name of the environment variable holding the API key. Never the key.
  std::string credential_env;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int backoff_base_ms = 250;
  /// Upper bound on concurrent upstream calls; 0 means unbounded.
  int max_in_flight = 0;
};

/// Throws ConfigError on a violated invariant.
void validate_config(const EngineConfig& config);

/// Network failure or timeout that persisted through every retry.
class EngineUnavailableError : public Error {
 public:
  EngineUnavailableError(const std::string& engine_id, const std::string& detail);
};

/// Upstream answered with a non-success status.
class EngineError : public Error {
 public:
  EngineError(const std::string& engine_id, int status, std::string body);

  int status() const noexcept { return status_; }
  const std::string& body() const noexcept { return body_; }

 private:
  int status_;
  std::string body_;
};

/// Upstream answered but the body did not match the wire schema. The raw
/// body is kept for debugging.
class DetectionFormatError : public Error {
 public:
  DetectionFormatError(const std::string& engine_id, const std::string& detail, std::string raw_body);

  const std::string& raw_body() const noexcept { return raw_body_; }

 private:
  std::string raw_body_;
};

struct EngineMetrics {
  std::uint64_t calls = 0;
  std::uint64_t upstream_attempts = 0;
  std::uint64_t failures = 0;
};

class DetectionEngine {
 public:
  virtual ~DetectionEngine() = default;

  virtual const std::string& id() const noexcept = 0;
  virtual EngineKind kind() const noexcept = 0;

  /// Spans reference pair.source_text and pair.mt_text and always pass
  /// span validation against them.
  virtual SanitizedSpans detect(const TranslationPair& pair) const = 0;

  virtual EngineMetrics metrics() const noexcept = 0;
};

/// Flags each distinct whitespace-delimited source token of at least
/// kMinTokenLength code points that occurs verbatim in the MT as
/// Untranslated/Minor, anchored at the first occurrence on each side.
class StubEngine final : public DetectionEngine {
 public:
  static constexpr std::size_t kMinTokenLength = 4;

  explicit StubEngine(std::string engine_id = "stub");

  const std::string& id() const noexcept override { return id_; }
  EngineKind kind() const noexcept override { return EngineKind::kStub; }
  SanitizedSpans detect(const TranslationPair& pair) const override;
  EngineMetrics metrics() const noexcept override;

  /// Raw spans before sanitization; exposed for tests.
  static std::vector<RawDetectedSpan> propose(const TranslationPair& pair);

 private:
  std::string id_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

/// Shared retry / backoff / in-flight handling for engines that call out.
class RemoteEngine : public DetectionEngine {
 public:
  RemoteEngine(EngineConfig config, std::shared_ptr<HttpTransport> transport);

  const std::string& id() const noexcept override { return config_.engine_id; }
  EngineKind kind() const noexcept override { return config_.kind; }
  SanitizedSpans detect(const TranslationPair& pair) const override;
  EngineMetrics metrics() const noexcept override;

  const EngineConfig& config() const noexcept { return config_; }

 protected:
  virtual HttpRequest build_request(const TranslationPair& pair) const = 0;
  /// Pull the wire-schema JSON document out of a successful response body.
  virtual std::string extract_payload(const std::string& body) const = 0;

  std::optional<std::string> credential() const;

 private:
  HttpResponse post_with_retries(const HttpRequest& request) const;

  EngineConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
  mutable std::atomic<std::uint64_t> calls_{0};
  mutable std::atomic<std::uint64_t> attempts_{0};
  mutable std::atomic<std::uint64_t> failures_{0};
};

/// OpenAI-compatible chat completion endpoint prompted with the EC-1 prompt.
class LlmEngine final : public RemoteEngine {
 public:
  using RemoteEngine::RemoteEngine;

 protected:
  HttpRequest build_request(const TranslationPair& pair) const override;
  std::string extract_payload(const std::string& body) const override;
};

/// Local sidecar that runs a span model and answers with the wire schema:
/// POST {"source_lang","target_lang","source","translation"} -> {"error_spans":[...]}.
class XcometEngine final : public RemoteEngine {
 public:
  using RemoteEngine::RemoteEngine;

 protected:
  HttpRequest build_request(const TranslationPair& pair) const override;
  std::string extract_payload(const std::string& body) const override;
};

std::unique_ptr<DetectionEngine> make_engine(const EngineConfig& config,
                                             std::shared_ptr<HttpTransport> transport = nullptr);

struct DetectionRequest {
  TranslationPair pair;
  std::string engine_id;
};

class EngineRegistry {
 public:
  /// Throws ConfigError on a duplicate id.
  void add(std::shared_ptr<DetectionEngine> engine);

  std::shared_ptr<DetectionEngine> find(std::string_view engine_id) const;
  std::vector<std::string> ids() const;
  bool empty() const noexcept { return engines_.empty(); }

  /// Throws BadRequestError naming the registered engines when the id is
  /// unknown; otherwise whatever the engine throws.
  SanitizedSpans detect(const DetectionRequest& request) const;

 private:
  std::map<std::string, std::shared_ptr<DetectionEngine>, std::less<>> engines_;
};

}  // namespace postedit::detection
