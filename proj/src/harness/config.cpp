#include "beda/harness/config.hpp"

#include <fstream>
#include <set>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::harness {

using nlohmann::json;

namespace {

constexpr std::pair<EstimatorKind, std::string_view> kEstimatorNames[] = {
    {EstimatorKind::kNone, "none"},       {EstimatorKind::kOracle, "oracle"},
    {EstimatorKind::kKeyword, "keyword"}, {EstimatorKind::kRandom, "random"},
    {EstimatorKind::kRemote, "remote"},
};

constexpr std::pair<JudgeKind, std::string_view> kJudgeNames[] = {
    {JudgeKind::kAuto, "auto"}, {JudgeKind::kRule, "rule"}, {JudgeKind::kGenerator, "generator"}};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
T get(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

}  // namespace

std::string_view to_string(EstimatorKind k) {
  for (const auto& [kind, name] : kEstimatorNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

EstimatorKind estimator_from_string(std::string_view name) {
  for (const auto& [kind, n] : kEstimatorNames) {
    if (n == name) return kind;
  }
  throw ConfigError("unknown estimator: " + std::string(name));
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  check_keys(j,
             {"game", "method", "estimator", "generator", "epsilon", "policy", "n_episodes", "repetitions",
              "seed", "output", "max_turns", "dataset", "workers", "judge"},
             "config");
  ExperimentConfig c;
  if (!j.contains("game")) throw ConfigError("config needs 'game'");
  try {
    c.game = game_from_string(get<std::string>(j, "game", ""));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.method = games::method_from_string(get<std::string>(j, "method", "beda"));
  const std::string est = get<std::string>(j, "estimator", "");
  if (est.empty()) {
    c.estimator = c.method == games::Method::kRandBelief ? EstimatorKind::kRandom : EstimatorKind::kNone;
  } else {
    c.estimator = estimator_from_string(est);
  }

  const json gen = j.value("generator", json::object());
  check_keys(gen,
             {"backend", "scripts", "endpoint", "model", "temperature", "max_turn_tokens", "retries",
              "initial_backoff_ms"},
             "generator");
  const std::string backend = get<std::string>(gen, "backend", "scripted");
  if (backend == "remote") {
    c.generator = generation::GeneratorConfig::from_env();
  } else if (backend != "scripted") {
    throw ConfigError("unknown generator backend: " + backend);
  }
  c.generator.endpoint = get<std::string>(gen, "endpoint", c.generator.endpoint);
  c.generator.model = get<std::string>(gen, "model", c.generator.model);
  c.generator.temperature = get<double>(gen, "temperature", c.generator.temperature);
  c.generator.max_turn_tokens = get<std::size_t>(gen, "max_turn_tokens", c.generator.max_turn_tokens);
  c.generator.retries = get<int>(gen, "retries", c.generator.retries);
  c.generator.initial_backoff =
      std::chrono::milliseconds(get<long long>(gen, "initial_backoff_ms", c.generator.initial_backoff.count()));
  c.scripts = get<std::map<std::string, std::string>>(gen, "scripts", {});

  c.epsilon = get<double>(j, "epsilon", c.epsilon);
  if (j.contains("policy") && !j.at("policy").is_null()) {
    try {
      c.policy = selection::SelectionPolicy::parse(get<std::string>(j, "policy", ""));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  c.n_episodes = get<std::size_t>(j, "n_episodes", c.n_episodes);
  c.repetitions = get<std::size_t>(j, "repetitions", c.repetitions);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.output = get<std::string>(j, "output", "");
  c.max_turns = get<std::size_t>(j, "max_turns", 0);
  c.dataset = get<std::string>(j, "dataset", "");
  c.workers = get<std::size_t>(j, "workers", 1);
  const std::string judge = get<std::string>(j, "judge", "auto");
  bool found = false;
  for (const auto& [kind, name] : kJudgeNames) {
    if (name == judge) {
      c.judge = kind;
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown judge: " + judge);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json gen{{"backend", generator.backend == generation::GeneratorConfig::Backend::kRemote ? "remote" : "scripted"},
           {"scripts", scripts},
           {"endpoint", generator.endpoint},
           {"model", generator.model},
           {"temperature", generator.temperature},
           {"max_turn_tokens", generator.max_turn_tokens},
           {"retries", generator.retries},
           {"initial_backoff_ms", generator.initial_backoff.count()}};
  std::string judge_name;
  for (const auto& [kind, name] : kJudgeNames) {
    if (kind == judge) judge_name = name;
  }
  return json{{"game", std::string(beda::to_string(game))},
              {"method", games::to_string(method)},
              {"estimator", to_string(estimator)},
              {"generator", gen},
              {"epsilon", epsilon},
              {"policy", policy ? json(policy->to_string()) : json(nullptr)},
              {"n_episodes", n_episodes},
              {"repetitions", repetitions},
              {"seed", seed},
              {"output", output},
              {"max_turns", max_turns},
              {"dataset", dataset},
              {"workers", workers},
              {"judge", judge_name}};
}

std::string ExperimentConfig::fingerprint() const {
  json j = to_json();
  j.erase("output");
  j.erase("workers");
  return hex64(fnv1a64(j.dump()));
}

void ExperimentConfig::validate() const {
  using games::Method;
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (n_episodes < 1) throw ConfigError("n_episodes must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in [0, 1)");
  generator.validate();
  switch (method) {
    case Method::kWoBelief:
    case Method::kWoBeliefCot:
    case Method::kWoBeliefReflect:
      if (estimator != EstimatorKind::kNone) {
        throw ConfigError(std::string(games::to_string(method)) + " takes no estimator");
      }
      break;
    case Method::kRandBelief:
      if (estimator != EstimatorKind::kRandom) throw ConfigError("rand_belief uses the random estimator");
      break;
    case Method::kBeda:
    case Method::kMindDial:
      if (estimator == EstimatorKind::kNone || estimator == EstimatorKind::kRandom) {
        throw ConfigError(std::string(games::to_string(method)) + " needs an oracle, keyword or remote estimator");
      }
      break;
  }
}

}  // namespace beda::harness
