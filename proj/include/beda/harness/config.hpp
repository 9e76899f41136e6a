#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "beda/game_id.hpp"
#include "beda/games/episode.hpp"
#include "beda/generation/generator.hpp"
#include "beda/selection/act_selection.hpp"

namespace beda::harness {

enum class EstimatorKind { kNone, kOracle, kKeyword, kRandom, kRemote };

std::string_view to_string(EstimatorKind k);
EstimatorKind estimator_from_string(std::string_view name);

enum class JudgeKind { kAuto, kRule, kGenerator };

struct ExperimentConfig {
  GameId game = GameId::kCkbg;
  games::Method method = games::Method::kBeda;
  EstimatorKind estimator = EstimatorKind::kNone;
  generation::GeneratorConfig generator;
  // Scripted policy per role, e.g. {"burglar": "always_true"}.
  std::map<std::string, std::string> scripts;
  double epsilon = selection::kDefaultEpsilon;
  std::optional<selection::SelectionPolicy> policy;
  std::size_t n_episodes = 1;
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;
  std::string output;
  std::size_t max_turns = 0;  // 0: game default
  std::string dataset;        // empty: scenarios generated from the seed
  std::size_t workers = 1;
  JudgeKind judge = JudgeKind::kAuto;

  // Unknown keys, bad values and incompatible method/estimator pairs are
  // ConfigErrors. GEN_* variables fill a remote generator's endpoint, key
  // and model when the document leaves them out.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);

  // Canonical form; the API key is never written.
  nlohmann::json to_json() const;
  // FNV-1a of the canonical form without output and workers.
  std::string fingerprint() const;
  void validate() const;
};

}  // namespace beda::harness
