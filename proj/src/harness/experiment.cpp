#include "beda/harness/experiment.hpp"

#include <atomic>
#include <condition_variable>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "beda/belief/remote_estimator.hpp"
#include "beda/errors.hpp"
#include "beda/jsonl.hpp"
#include "beda/util.hpp"

namespace beda::harness {

using games::Method;

namespace {

const std::map<std::string, std::string> kDefaultPolicies = {
    {"keeper", "mislead"},      {"burglar", "follow_advice"}, {"player_a", "cooperative"},
    {"player_b", "cooperative"}, {"negotiator_1", "fair"},    {"negotiator_2", "fair"},
};

std::string policy_for(const ExperimentConfig& config, const std::string& role) {
  const auto it = config.scripts.find(role);
  if (it != config.scripts.end()) return it->second;
  return kDefaultPolicies.at(role);
}

generation::GeneratorPtr scripted_for(const ExperimentConfig& config, const games::Scenario& scenario,
                                      const std::string& role) {
  const std::string policy = policy_for(config, role);
  if (const auto* s = std::get_if<games::CkbgSetting>(&scenario)) {
    return role == "keeper" ? games::ckbg_scripted_keeper(*s, policy) : games::ckbg_scripted_burglar(*s, policy);
  }
  if (const auto* s = std::get_if<games::MfScenario>(&scenario)) {
    return games::mf_scripted_player(*s, role == "player_a" ? 0 : 1, policy);
  }
  const auto& s = std::get<games::CasinoScenario>(scenario);
  return games::casino_scripted_negotiator(s, role == "negotiator_1" ? 0 : 1, policy);
}

generation::GeneratorPtr scripted_judge() {
  return std::make_shared<generation::ScriptedGenerator>(
      std::map<generation::ScriptedGenerator::Key, std::string>{}, [](const generation::Prompt& p) {
        const std::string marker = "Dialogue:\n";
        const auto pos = p.system.find(marker);
        const auto ctx = belief::DialogueContext::parse(pos == std::string::npos ? "" : p.system.substr(pos + marker.size()));
        return std::string(games::mf_judge(ctx) ? "Yes" : "No");
      });
}

generation::GeneratorPtr wrap_for(Method method, generation::GeneratorPtr g) {
  if (method == Method::kWoBeliefCot) return generation::wrap_cot(std::move(g));
  if (method == Method::kWoBeliefReflect) return generation::wrap_self_reflect(std::move(g));
  return g;
}

std::shared_ptr<const belief::BeliefEstimator> estimator_for(const ExperimentConfig& config,
                                                             const games::Scenario& scenario,
                                                             std::uint64_t seed) {
  switch (config.estimator) {
    case EstimatorKind::kNone: return nullptr;
    case EstimatorKind::kKeyword: return std::make_shared<belief::KeywordEstimator>();
    case EstimatorKind::kRandom: return std::make_shared<belief::RandomEstimator>(seed);
    case EstimatorKind::kRemote:
      return std::make_shared<belief::RemoteEstimator>(belief::RemoteEstimatorConfig::from_env());
    case EstimatorKind::kOracle:
      if (const auto* s = std::get_if<games::CkbgSetting>(&scenario)) return games::ckbg_oracle(*s);
      if (const auto* s = std::get_if<games::MfScenario>(&scenario)) return games::mf_oracle(*s);
      return games::casino_oracle(std::get<games::CasinoScenario>(scenario));
  }
  return nullptr;
}

}  // namespace

RunResources RunResources::from_config(const ExperimentConfig& config) {
  RunResources r;
  r.words = games::WordLists::load();
  if (!config.dataset.empty()) r.dataset = games::load_dataset(config.dataset, config.game);
  return r;
}

std::uint64_t episode_seed(std::uint64_t global_seed, std::size_t repetition, std::size_t index) {
  return derive_seed(global_seed, repetition, index);
}

games::Scenario scenario_for(const ExperimentConfig& config, const RunResources& resources, std::size_t index) {
  if (!resources.dataset.empty()) return resources.dataset[index % resources.dataset.size()];
  return games::generate_scenario(config.game, derive_seed(derive_seed(config.seed, ~0ULL), index),
                                  resources.words);
}

EpisodeRecord run_episode(const ExperimentConfig& config, const RunResources& resources, std::size_t repetition,
                          std::size_t index, const games::Scenario& scenario) {
  if (games::game_of(scenario) != config.game) throw ConfigError("scenario does not match the configured game");
  EpisodeRecord record;
  record.config_fingerprint = config.fingerprint();
  record.game = config.game;
  record.method = config.method;
  record.repetition = repetition;
  record.index = index;
  record.episode_seed = episode_seed(config.seed, repetition, index);
  record.scenario = games::to_json(scenario);

  const std::uint64_t seed = record.episode_seed;
  auto generator = [&](const std::string& role) -> generation::GeneratorPtr {
    if (resources.generators) return resources.generators(scenario, role);
    if (config.generator.backend == generation::GeneratorConfig::Backend::kRemote) {
      return std::make_shared<generation::RemoteChatGenerator>(config.generator);
    }
    return scripted_for(config, scenario, role);
  };
  auto wiring = [&](const std::string& role, std::size_t side, bool method_agent) {
    games::AgentWiring w;
    w.seed = derive_seed(seed, side + 1);
    w.generator = generator(role);
    if (!method_agent) return w;
    w.method = config.method;
    w.estimator = estimator_for(config, scenario, derive_seed(seed, 0x65737469ULL, side));
    w.generator = wrap_for(config.method, w.generator);
    w.epsilon = config.epsilon;
    w.policy_override = config.policy;
    return w;
  };

  try {
    games::Episode episode;
    if (const auto* s = std::get_if<games::CkbgSetting>(&scenario)) {
      episode = games::ckbg_run_episode(*s, wiring("keeper", 0, true), wiring("burglar", 1, false),
                                        config.max_turns ? config.max_turns : games::kCkbgDefaultMaxTurns);
    } else if (const auto* s = std::get_if<games::MfScenario>(&scenario)) {
      games::MfOptions options;
      if (config.max_turns) options.max_turns = config.max_turns;
      const bool scripted = config.generator.backend == generation::GeneratorConfig::Backend::kScripted;
      if (config.judge == JudgeKind::kGenerator || (config.judge == JudgeKind::kAuto && !scripted)) {
        options.judge = scripted ? scripted_judge() : generator("judge");
      }
      episode = games::mf_run_episode(*s, wiring("player_a", 0, true), wiring("player_b", 1, true), options);
    } else {
      games::CasinoOptions options;
      if (config.max_turns) options.max_turns = config.max_turns;
      episode = games::casino_run_episode(std::get<games::CasinoScenario>(scenario),
                                          wiring("negotiator_1", 0, true), wiring("negotiator_2", 1, true),
                                          options);
    }
    record.outcome = episode.outcome;
    record.transcript = games::to_json(episode.transcript);
  } catch (const TransportError& e) {
    record.outcome = games::EpisodeOutcome{};
    record.outcome.game = config.game;
    record.outcome.infra_failed = true;
    record.outcome.error = e.what();
    record.transcript = nullptr;
  } catch (const ProtocolError& e) {
    record.outcome = games::EpisodeOutcome{};
    record.outcome.game = config.game;
    record.outcome.infra_failed = true;
    record.outcome.error = e.what();
    record.transcript = nullptr;
  }
  return record;
}

std::string report_path(const std::string& records_path) { return records_path + ".report.json"; }

ExperimentResult run_experiment(const ExperimentConfig& config, const RunResources& resources) {
  config.validate();
  if (config.estimator == EstimatorKind::kRemote) belief::RemoteEstimatorConfig::from_env();

  const std::size_t total = config.n_episodes * config.repetitions;
  std::vector<games::Scenario> scenarios;
  for (std::size_t i = 0; i < config.n_episodes; ++i) scenarios.push_back(scenario_for(config, resources, i));

  std::ofstream out;
  if (!config.output.empty()) {
    out.open(config.output, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + config.output);
  }

  std::vector<std::optional<EpisodeRecord>> slots(total);
  std::size_t flushed = 0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto worker = [&]() {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t rep = job / config.n_episodes;
      const std::size_t idx = job % config.n_episodes;
      try {
        EpisodeRecord r = run_episode(config, resources, rep, idx, scenarios[idx]);
        std::lock_guard<std::mutex> lock(mu);
        if (r.outcome.infra_failed) {
          std::cerr << "warning: episode " << r.episode_id() << " failed on the backend: " << r.outcome.error
                    << "\n";
        }
        slots[job] = std::move(r);
        while (flushed < total && slots[flushed]) {
          if (out.is_open()) append_jsonl(out, to_json(*slots[flushed]));
          ++flushed;
        }
        if (out.is_open()) out.flush();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };

  const std::size_t n_workers = std::min(config.workers, total);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& s : slots) result.records.push_back(std::move(*s));
  result.report = compute_metrics(result.records, config.game);
  result.exit_code = exit_code_for(result.report);
  if (!config.output.empty()) {
    std::ofstream rep(report_path(config.output), std::ios::binary | std::ios::trunc);
    rep << to_json(result.report).dump(2) << '\n';
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, RunResources::from_config(config));
}

EpisodeRecord replay(const ExperimentConfig& config, const RunResources& resources, const EpisodeRecord& record) {
  if (record.config_fingerprint != config.fingerprint()) {
    throw ConfigError("record " + record.episode_id() + " was produced by a different config");
  }
  return run_episode(config, resources, record.repetition, record.index,
                     games::scenario_from_json(record.scenario));
}

std::vector<belief::LabeledExample> training_data_from_records(const std::vector<EpisodeRecord>& records,
                                                               const belief::ClipPolicy& clip,
                                                               std::size_t negative_ratio, std::uint64_t seed) {
  std::vector<belief::TruthTranscript> transcripts;
  for (const auto& r : records) {
    if (r.transcript.is_null()) continue;
    for (auto& t : games::truth_transcripts(r.episode_id(), r.transcript)) transcripts.push_back(std::move(t));
  }
  return belief::emit_training_data(transcripts, clip, negative_ratio, seed);
}

}  // namespace beda::harness
