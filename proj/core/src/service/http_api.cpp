#include "postedit/service/http_api.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cctype>

#include "postedit/detection/engine.hpp"

namespace postedit::service {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const auto slash = path.find('/', pos);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return parts;
}

ApiResponse json_response(int status, const Json& body) {
  ApiResponse r;
  r.status = status;
  r.body = dump_json(body);
  return r;
}

ApiResponse error_response(int status, ErrorCode code, const std::string& message, Json extra = Json::object()) {
  Json err = Json::object();
  err["code"] = to_string(code);
  err["message"] = message;
  for (auto& [key, value] : extra.items()) err[key] = value;
  Json body = Json::object();
  body["error"] = std::move(err);
  return json_response(status, body);
}

ApiResponse method_not_allowed(std::string allow) {
  auto r = error_response(405, ErrorCode::kBadRequest, "method not allowed");
  r.headers["Allow"] = std::move(allow);
  return r;
}

std::optional<std::string> query(const ApiRequest& req, const std::string& key) {
  const auto it = req.query.find(key);
  if (it == req.query.end()) return std::nullopt;
  return it->second;
}

std::size_t parse_count(const std::string& text, std::string_view name) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw BadRequestError(std::string(name) + " must be a non-negative integer");
  }
  return value;
}

bool parse_flag(const std::optional<std::string>& text) {
  if (!text || text->empty()) return false;
  const auto v = lower(*text);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw BadRequestError("force must be true or false");
}

/// Accepts `3`, `"3"` and `W/"3"`.
std::uint64_t parse_if_match(std::string value) {
  if (value.rfind("W/", 0) == 0) value.erase(0, 2);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  std::uint64_t version = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), version);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw BadRequestError("If-Match must carry an annotation version");
  }
  return version;
}

std::vector<TranslationPair> pairs_from_body(const std::string& body) {
  const auto doc = parse_json(body);
  const Json* list = &doc;
  if (doc.is_object()) list = &json_field::require(doc, "pairs");
  if (!list->is_array()) throw SchemaError("pairs", "field 'pairs' must be an array");
  std::vector<TranslationPair> pairs;
  pairs.reserve(list->size());
  for (const auto& j : *list) {
    if (!j.is_object()) throw SchemaError("pairs", "every pair must be an object");
    pairs.push_back(pair_from_json(j));
  }
  return pairs;
}

}  // namespace

std::optional<std::string> ApiRequest::header(std::string_view name) const {
  const auto wanted = lower(name);
  for (const auto& [key, value] : headers) {
    if (lower(key) == wanted) return value;
  }
  return std::nullopt;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBadRequest:
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
    case ErrorCode::kVersion:
      return 400;
    case ErrorCode::kUnauthorized:
      return 401;
    case ErrorCode::kForbidden:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kBounds:
    case ErrorCode::kOverlap:
    case ErrorCode::kValidation:
      return 422;
    case ErrorCode::kPreconditionRequired:
      return 428;
    case ErrorCode::kEngineUnavailable:
    case ErrorCode::kEngineError:
    case ErrorCode::kDetectionFormat:
      return 502;
    default:
      return 500;
  }
}

Router::Router(std::shared_ptr<Service> service, std::map<std::string, std::string> tokens)
    : service_(std::move(service)), tokens_(std::move(tokens)) {
  if (!service_) throw ConfigError("router requires a service");
}

ApiResponse Router::dispatch(const ApiRequest& request) const {
  try {
    return route(request);
  } catch (const service::ConflictError& e) {
    Json extra = Json::object();
    extra["current_version"] = e.current_version();
    extra["ids"] = e.ids();
    return error_response(409, e.code(), e.what(), std::move(extra));
  } catch (const ValidationError& e) {
    Json extra = Json::object();
    extra["violations"] = to_json(e.violations());
    return error_response(422, e.code(), e.what(), std::move(extra));
  } catch (const SchemaError& e) {
    Json extra = Json::object();
    extra["field"] = e.field();
    return error_response(400, e.code(), e.what(), std::move(extra));
  } catch (const ParseError& e) {
    Json extra = Json::object();
    extra["byte_offset"] = e.byte_offset();
    return error_response(400, e.code(), e.what(), std::move(extra));
  } catch (const detection::EngineError& e) {
    Json extra = Json::object();
    extra["upstream_status"] = e.status();
    return error_response(502, e.code(), e.what(), std::move(extra));
  } catch (const Error& e) {
    return error_response(http_status(e.code()), e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, ErrorCode::kIo, std::string("internal error: ") + e.what());
  }
}

std::optional<std::string> Router::authenticate(const ApiRequest& request) const {
  if (tokens_.empty()) return std::nullopt;
  const auto header = request.header("Authorization");
  if (!header) throw UnauthorizedError("missing bearer token");
  constexpr std::string_view kScheme = "Bearer ";
  if (header->size() <= kScheme.size() || lower(header->substr(0, kScheme.size())) != lower(kScheme)) {
    throw UnauthorizedError("authorization must use the Bearer scheme");
  }
  const auto it = tokens_.find(header->substr(kScheme.size()));
  if (it == tokens_.end()) throw UnauthorizedError("unknown bearer token");
  return it->second;
}

ApiResponse Router::route(const ApiRequest& req) const {
  const auto parts = split_path(req.path);
  const auto& m = req.method;

  if (parts.size() == 1 && parts[0] == "health") {
    if (m != "GET") return method_not_allowed("GET");
    return json_response(200, Json{{"status", "ok"}});
  }

  if (parts.size() == 3 && parts[0] == "datasets" && parts[2] == "pairs") {
    const auto& dataset = parts[1];
    if (m == "POST") {
      const auto result = service_->ingest_pairs(dataset, pairs_from_body(req.body));
      Json body = Json::object();
      body["dataset_id"] = dataset;
      body["count"] = result.created;
      body["unchanged"] = result.unchanged;
      return json_response(result.created > 0 ? 201 : 200, body);
    }
    if (m == "GET") {
      std::optional<PairStatus> status;
      if (const auto s = query(req, "status"); s && !s->empty()) {
        status = parse_status(*s);
        if (!status) throw BadRequestError("unknown status '" + *s + "'");
      }
      const auto page = query(req, "page");
      const auto size = query(req, "page_size");
      return json_response(200, to_json(service_->list_pairs(
                                    dataset, status, page ? parse_count(*page, "page") : 1,
                                    size ? parse_count(*size, "page_size") : kDefaultPageSize)));
    }
    return method_not_allowed("GET, POST");
  }

  if (parts.size() == 3 && parts[0] == "datasets" && parts[2] == "export") {
    if (m != "GET") return method_not_allowed("GET");
    const auto format = parse_export_format(query(req, "format").value_or("json"));
    ApiResponse r;
    r.body = service_->export_dataset(parts[1], format);
    r.content_type = format == ExportFormat::kJson ? "application/json" : "text/csv; charset=utf-8";
    r.headers["Content-Disposition"] =
        "attachment; filename=\"" + parts[1] + (format == ExportFormat::kJson ? ".json\"" : ".csv\"");
    return r;
  }

  if (parts.size() == 2 && parts[0] == "pairs") {
    if (m != "GET") return method_not_allowed("GET");
    auto r = json_response(200, to_json(service_->get_pair(parts[1])));
    return r;
  }

  if (parts.size() == 3 && parts[0] == "pairs" && parts[2] == "detect") {
    if (m != "POST") return method_not_allowed("POST");
    const auto outcome =
        service_->run_detection(parts[1], query(req, "engine").value_or(""), parse_flag(query(req, "force")));
    return json_response(200, to_json(outcome));
  }

  if (parts.size() == 3 && parts[0] == "pairs" && parts[2] == "annotation") {
    if (m != "PUT") return method_not_allowed("PUT");
    const auto annotator = authenticate(req);
    const auto if_match = req.header("If-Match");
    if (!if_match) throw PreconditionRequiredError("If-Match with the expected annotation version is required");
    const auto expected = parse_if_match(*if_match);
    const auto doc = parse_json(req.body);
    if (!doc.is_object()) throw SchemaError("annotation", "annotation must be a JSON object");
    auto annotation = annotation_from_json(doc);
    if (annotator) {
      if (!annotation.annotator_id.empty() && annotation.annotator_id != *annotator) {
        throw ForbiddenError("token does not belong to annotator '" + annotation.annotator_id + "'");
      }
      annotation.annotator_id = *annotator;
    }
    const auto stored = service_->submit_annotation(parts[1], std::move(annotation), expected);
    auto r = json_response(200, postedit::to_json(stored));
    r.headers["ETag"] = "\"" + std::to_string(stored.version) + "\"";
    return r;
  }

  return error_response(404, ErrorCode::kNotFound, "no route for " + req.path);
}

struct ApiServer::Impl {
  std::shared_ptr<const Router> router;
  httplib::Server server;

  void handle(const httplib::Request& in, httplib::Response& out) const {
    ApiRequest req;
    req.method = in.method;
    req.path = in.path;
    for (const auto& [k, v] : in.params) req.query.emplace(k, v);
    for (const auto& [k, v] : in.headers) req.headers.emplace(k, v);
    req.body = in.body;
    const auto res = router->dispatch(req);
    out.status = res.status;
    for (const auto& [k, v] : res.headers) out.set_header(k, v);
    out.set_content(res.body, res.content_type);
  }
};

ApiServer::ApiServer(std::shared_ptr<const Router> router) : impl_(std::make_unique<Impl>()) {
  impl_->router = std::move(router);
  const auto handler = [impl = impl_.get()](const httplib::Request& in, httplib::Response& out) {
    impl->handle(in, out);
  };
  constexpr const char* kAny = R"(/.*)";
  impl_->server.Get(kAny, handler);
  impl_->server.Post(kAny, handler);
  impl_->server.Put(kAny, handler);
  impl_->server.Delete(kAny, handler);
  impl_->server.Patch(kAny, handler);
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

void ApiServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace postedit::service
