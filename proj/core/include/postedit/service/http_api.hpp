#pragma once

// HTTP+JSON binding of Service. Router is transport-free so it can be tested
// without sockets; ApiServer puts it behind cpp-httplib.
//
// Routes:
//   GET  /health
//   POST /datasets/{dataset_id}/pairs            {"pairs":[...]} or [...]
//   GET  /datasets/{dataset_id}/pairs?status=&page=&page_size=
//   GET  /pairs/{pair_id}
//   POST /pairs/{pair_id}/detect?engine=&force=
//   PUT  /pairs/{pair_id}/annotation             If-Match: <version>
//   GET  /datasets/{dataset_id}/export?format=json|csv
//
// Errors are {"error":{"code","message",...}} with extra members for
// conflicts (current_version, ids), violations and upstream failures.

#include <map>
#include <memory>
#include <string>

#include "postedit/service/service.hpp"

namespace postedit::service {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  /// Header names are matched case-insensitively.
  std::map<std::string, std::string> headers;
  std::string body;

  std::optional<std::string> header(std::string_view name) const;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

/// HTTP status for an error code.
int http_status(ErrorCode code) noexcept;

class Router {
 public:
  /// `tokens` maps bearer token -> annotator_id. When empty, writes are not
  /// authenticated and the annotator_id in the body is taken as is.
  Router(std::shared_ptr<Service> service, std::map<std::string, std::string> tokens = {});

  /// Never throws; every failure becomes an error response.
  ApiResponse dispatch(const ApiRequest& request) const;

 private:
  ApiResponse route(const ApiRequest& request) const;
  std::optional<std::string> authenticate(const ApiRequest& request) const;

  std::shared_ptr<Service> service_;
  std::map<std::string, std::string> tokens_;
};

class ApiServer {
 public:
  explicit ApiServer(std::shared_ptr<const Router> router);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Bind to host:port (port 0 picks a free port) and return the bound port.
  int bind(const std::string& host, int port);
  /// Serve until stop(); blocks.
  void listen();
  /// Block until listen() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace postedit::service
