#include "beda/http_client.hpp"

#include <thread>

#include "httplib.h"

#include "beda/errors.hpp"

namespace beda::http {

Endpoint parse_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint '" + url + "' has no scheme");
  }
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  if (path_start == std::string::npos) {
    ep.origin = url;
    ep.path = "/";
  } else {
    ep.origin = url.substr(0, path_start);
    ep.path = url.substr(path_start);
  }
  if (ep.origin.size() <= scheme_end + 3) {
    throw ConfigError("endpoint '" + url + "' has no host");
  }
  return ep;
}

Response post_json(const Endpoint& endpoint, const std::string& body,
                   const std::map<std::string, std::string>& headers,
                   const RetryPolicy& policy) {
  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);

  auto backoff = policy.initial_backoff;
  std::string last_error;
  const int attempts = policy.retries + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(endpoint.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        policy.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto res = client.Post(endpoint.path, hdrs, body, "application/json");
    if (res) {
      const bool retryable = policy.retry_server_errors &&
                             (res->status == 429 || res->status >= 500);
      if (!retryable) return Response{res->status, res->body, attempt};
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      last_error = httplib::to_string(res.error());
    }
    if (attempt < attempts && backoff.count() > 0) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(static_cast<double>(backoff.count()) * policy.backoff_factor));
    }
  }
  throw TransportError("POST " + endpoint.origin + endpoint.path + " failed after " +
                       std::to_string(attempts) + " attempt(s): " + last_error);
}

}  // namespace beda::http
