#pragma once

// Service configuration: one JSON document.
//
//   {
//     "bind": "127.0.0.1:8080",
//     "store": {"backend": "memory" | "file", "path": "data/store.json"},
//     "engines": [
//       {"engine_id": "stub", "kind": "stub"},
//       {"engine_id": "ec1", "kind": "llm",
//        "endpoint": "https://api.openai.com/v1/chat/completions",
//        "model": "gpt-4o", "credential_env": "OPENAI_API_KEY",
//        "timeout_s": 30, "max_retries": 2, "backoff_base_ms": 250,
//        "max_in_flight": 4},
//       {"engine_id": "xcomet", "kind": "xcomet",
//        "endpoint": "http://127.0.0.1:9000/detect"}
//     ],
//     "auth_tokens": {"alice": "ALICE_TOKEN"}
//   }
//
// auth_tokens maps annotator_id to the name of the environment variable that
// holds that annotator's bearer token. With no tokens, writes are anonymous.

#include <map>
#include <string>
#include <vector>

#include "postedit/detection/engine.hpp"

namespace postedit::service {

enum class StoreBackend { kMemory, kFile };

std::string_view to_string(StoreBackend b) noexcept;
std::optional<StoreBackend> parse_store_backend(std::string_view text) noexcept;

struct ServiceConfig {
  std::string bind = "127.0.0.1:8080";
  StoreBackend store = StoreBackend::kMemory;
  std::string store_path;
  std::vector<detection::EngineConfig> engines;
  std::map<std::string, std::string> auth_tokens;  // annotator_id -> env var name
};

/// Stub engine only, memory store.
ServiceConfig default_config();

ServiceConfig parse_config(std::string_view json_text);
ServiceConfig load_config(const std::string& path);

/// Throws ConfigError: no engines, file backend without a path, bad engine.
void validate(const ServiceConfig& config);

/// token -> annotator_id, read from the environment. Throws ConfigError when
/// a referenced variable is unset.
std::map<std::string, std::string> resolve_tokens(const ServiceConfig& config);

struct BindAddress {
  std::string host;
  int port = 0;
};

/// "host:port" or ":port". Throws ConfigError.
BindAddress parse_bind(std::string_view bind);

}  // namespace postedit::service
