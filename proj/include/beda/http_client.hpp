#pragma once

#include <chrono>
#include <map>
#include <string>

namespace beda::http {

// "http://host:port/path" split into the origin httplib connects to and the
// request path.
struct Endpoint {
  std::string origin;
  std::string path;
};

Endpoint parse_endpoint(const std::string& url);

struct RetryPolicy {
  int retries = 2;  // extra attempts after the first
  std::chrono::milliseconds initial_backoff{200};
  double backoff_factor = 2.0;
  std::chrono::milliseconds timeout{60000};
  // Retry 429 and 5xx responses as well as connection failures.
  bool retry_server_errors = false;
};

struct Response {
  int status = 0;
  std::string body;
  int attempts = 0;
};

// POSTs a JSON body. Connection failures (and, if enabled, 429/5xx) are
// retried; a TransportError is thrown once the attempts run out. Any other
// status is returned to the caller unchanged.
Response post_json(const Endpoint& endpoint, const std::string& body,
                   const std::map<std::string, std::string>& headers,
                   const RetryPolicy& policy);

}  // namespace beda::http
