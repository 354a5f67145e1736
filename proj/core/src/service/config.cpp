#include "postedit/service/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "postedit/json_codec.hpp"

namespace postedit::service {

std::string_view to_string(StoreBackend b) noexcept {
  return b == StoreBackend::kFile ? "file" : "memory";
}

std::optional<StoreBackend> parse_store_backend(std::string_view text) noexcept {
  if (text == "memory") return StoreBackend::kMemory;
  if (text == "file") return StoreBackend::kFile;
  return std::nullopt;
}

ServiceConfig default_config() {
  ServiceConfig c;
  detection::EngineConfig stub;
  stub.engine_id = "stub";
  stub.kind = detection::EngineKind::kStub;
  c.engines.push_back(stub);
  return c;
}

namespace {

detection::EngineConfig engine_from_json(const Json& j) {
  using namespace json_field;
  detection::EngineConfig e;
  e.engine_id = require_string(j, "engine_id");
  const auto kind = require_string(j, "kind");
  const auto parsed = detection::parse_engine_kind(kind);
  if (!parsed) throw ConfigError("engine '" + e.engine_id + "': unknown kind '" + kind + "'");
  e.kind = *parsed;
  e.endpoint = optional_string(j, "endpoint").value_or("");
  e.model = optional_string(j, "model").value_or("");
  e.credential_env = optional_string(j, "credential_env").value_or("");
  if (const auto it = j.find("timeout_s"); it != j.end()) {
    if (!it->is_number()) throw ConfigError("engine '" + e.engine_id + "': timeout_s must be a number");
    e.timeout_seconds = it->get<double>();
  }
  if (const auto v = optional_integer(j, "max_retries")) e.max_retries = static_cast<int>(*v);
  if (const auto v = optional_integer(j, "backoff_base_ms")) e.backoff_base_ms = static_cast<int>(*v);
  if (const auto v = optional_integer(j, "max_in_flight")) e.max_in_flight = static_cast<int>(*v);
  return e;
}

}  // namespace

ServiceConfig parse_config(std::string_view json_text) {
  Json doc;
  try {
    doc = parse_json(json_text);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ServiceConfig c;
  try {
    c.bind = json_field::optional_string(doc, "bind").value_or(c.bind);
    if (const auto it = doc.find("store"); it != doc.end()) {
      const auto backend = json_field::optional_string(*it, "backend").value_or("memory");
      const auto parsed = parse_store_backend(backend);
      if (!parsed) throw ConfigError("unknown store backend '" + backend + "'");
      c.store = *parsed;
      c.store_path = json_field::optional_string(*it, "path").value_or("");
    }
    if (const auto it = doc.find("engines"); it != doc.end()) {
      if (!it->is_array()) throw ConfigError("engines must be an array");
      for (const auto& e : *it) c.engines.push_back(engine_from_json(e));
    }
    if (const auto it = doc.find("auth_tokens"); it != doc.end()) {
      if (!it->is_object()) throw ConfigError("auth_tokens must be an object");
      for (const auto& [annotator, ref] : it->items()) {
        if (!ref.is_string()) throw ConfigError("auth_tokens." + annotator + " must be a string");
        c.auth_tokens[annotator] = ref.get<std::string>();
      }
    }
  } catch (const SchemaError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ServiceConfig& config) {
  if (config.engines.empty()) throw ConfigError("at least one engine must be configured");
  if (config.store == StoreBackend::kFile && config.store_path.empty()) {
    throw ConfigError("file store backend requires a store path");
  }
  for (const auto& e : config.engines) detection::validate_config(e);
  parse_bind(config.bind);
}

std::map<std::string, std::string> resolve_tokens(const ServiceConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& [annotator, env] : config.auth_tokens) {
    const char* token = std::getenv(env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError("token variable " + env + " for annotator '" + annotator + "' is not set");
    }
    if (!out.emplace(token, annotator).second) {
      throw ConfigError("annotators share a bearer token");
    }
  }
  return out;
}

BindAddress parse_bind(std::string_view bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("bind address must be host:port");
  BindAddress out;
  out.host = std::string(bind.substr(0, colon));
  if (out.host.empty()) out.host = "0.0.0.0";
  const auto port = bind.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), out.port);
  if (ec != std::errc() || ptr != port.data() + port.size() || out.port < 0 || out.port > 65535) {
    throw ConfigError("invalid port in bind address '" + std::string(bind) + "'");
  }
  return out;
}

}  // namespace postedit::service
