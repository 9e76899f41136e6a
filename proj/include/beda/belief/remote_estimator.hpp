#pragma once

#include <string>

#include "json.hpp"

#include "beda/belief/estimator.hpp"
#include "beda/http_client.hpp"

namespace beda::belief {

struct RemoteEstimatorConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8765/estimate
  http::RetryPolicy retry;

  // Reads EST_ENDPOINT; throws ConfigError when unset.
  static RemoteEstimatorConfig from_env();
};

// Request document of the estimation wire protocol.
nlohmann::json make_estimation_request(const DialogueContext& context,
                                       const WorldSet& world_set,
                                       Perspective perspective);

// Validates a response body against the request; throws ProtocolError.
BeliefVector parse_estimation_response(const std::string& body, std::size_t expected,
                                       Perspective perspective);

BeliefVector remote_estimate(const RemoteEstimatorConfig& config,
                             const DialogueContext& context, const WorldSet& world_set,
                             Perspective perspective);

class RemoteEstimator final : public BeliefEstimator {
 public:
  explicit RemoteEstimator(RemoteEstimatorConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "remote"; }

 private:
  BeliefVector do_estimate(const DialogueContext& context, const WorldSet& world_set,
                           Perspective perspective) const override;
  RemoteEstimatorConfig config_;
};

}  // namespace beda::belief
