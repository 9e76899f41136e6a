#include "beda/belief/remote_estimator.hpp"

#include <cstdlib>

#include "beda/errors.hpp"

namespace beda::belief {

RemoteEstimatorConfig RemoteEstimatorConfig::from_env() {
  const char* endpoint = std::getenv("EST_ENDPOINT");
  if (endpoint == nullptr || *endpoint == '\0') {
    throw ConfigError("EST_ENDPOINT is not set");
  }
  RemoteEstimatorConfig cfg;
  cfg.endpoint = endpoint;
  return cfg;
}

nlohmann::json make_estimation_request(const DialogueContext& context,
                                       const WorldSet& world_set,
                                       Perspective perspective) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : world_set.events()) events.push_back(e.text);
  return {{"context", context.render()},
          {"events", std::move(events)},
          {"perspective", std::string(to_string(perspective))}};
}

BeliefVector parse_estimation_response(const std::string& body, std::size_t expected,
                                       Perspective perspective) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("estimation response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probabilities") ||
      !doc["probabilities"].is_array()) {
    throw ProtocolError("estimation response lacks a 'probabilities' array");
  }
  const auto& probs = doc["probabilities"];
  if (probs.size() != expected) {
    throw ProtocolError("estimation response has " + std::to_string(probs.size()) +
                        " probabilities for " + std::to_string(expected) + " events");
  }
  std::vector<double> values;
  values.reserve(expected);
  for (const auto& p : probs) {
    if (!p.is_number()) throw ProtocolError("non-numeric probability in estimation response");
    const double v = p.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ProtocolError("probability " + std::to_string(v) + " is outside [0,1]");
    }
    values.push_back(v);
  }
  return BeliefVector(perspective, std::move(values));
}

BeliefVector remote_estimate(const RemoteEstimatorConfig& config,
                             const DialogueContext& context, const WorldSet& world_set,
                             Perspective perspective) {
  if (config.endpoint.empty()) throw ConfigError("estimator endpoint is not configured");
  const auto endpoint = http::parse_endpoint(config.endpoint);
  const auto request = make_estimation_request(context, world_set, perspective);
  const auto response = http::post_json(endpoint, request.dump(), {}, config.retry);
  if (response.status < 200 || response.status >= 300) {
    throw ProtocolError("estimator returned HTTP " + std::to_string(response.status));
  }
  return parse_estimation_response(response.body, world_set.size(), perspective);
}

BeliefVector RemoteEstimator::do_estimate(const DialogueContext& context,
                                          const WorldSet& world_set,
                                          Perspective perspective) const {
  return remote_estimate(config_, context, world_set, perspective);
}

}  // namespace beda::belief
