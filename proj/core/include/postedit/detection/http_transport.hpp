#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>

#include "postedit/error.hpp"

namespace postedit::detection {

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Connection failure or timeout: no HTTP status was received.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what) : Error(ErrorCode::kEngineUnavailable, what) {}
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  /// POST and return whatever status came back. Throws TransportError when no
  /// response arrives.
  virtual HttpResponse post(const HttpRequest& request) const = 0;
};

/// cpp-httplib backed transport. https URLs need OpenSSL support compiled in.
std::shared_ptr<HttpTransport> make_default_transport();

}  // namespace postedit::detection
