#pragma once

#include <optional>
#include <vector>

#include "json.hpp"

#include "beda/game_id.hpp"
#include "beda/games/episode.hpp"
#include "beda/harness/records.hpp"

namespace beda::harness {

// Rates are undefined (nullopt) when their denominator is empty. The
// success rate is a percentage; the agreement rate is a fraction.
struct Metrics {
  std::size_t episodes = 0;
  std::size_t valid = 0;
  std::size_t format_errors = 0;
  std::size_t infra_failures = 0;
  std::size_t successes = 0;
  std::size_t selection_steps = 0;
  std::size_t fallbacks = 0;
  std::optional<double> success_rate;
  std::optional<double> avg_turns;
  std::optional<double> avg_tokens;
  std::optional<double> sr_per_turn;
  std::optional<double> sr_per_token;
  std::optional<double> agreement_rate;  // CaSiNo
  std::optional<double> mean_reward;     // CaSiNo, agreeing episodes only
  std::optional<double> fallback_rate;
};

struct MetricsReport {
  GameId game = GameId::kCkbg;
  std::vector<Metrics> repetitions;
  // Counts are summed; each rate is the mean of the defined per-repetition rates.
  Metrics mean;

  bool empty_after_exclusion() const { return mean.valid == 0; }
  bool all_infra_failed() const { return mean.episodes > 0 && mean.infra_failures == mean.episodes; }
};

// Format-error and infrastructure-failed episodes count in `episodes` and
// their own counters only.
Metrics metrics_for(GameId game, const std::vector<games::EpisodeOutcome>& outcomes);

// Groups by repetition. Records of more than one game: DomainError.
MetricsReport compute_metrics(const std::vector<EpisodeRecord>& records);
MetricsReport compute_metrics(const std::vector<EpisodeRecord>& records, GameId game);

nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const MetricsReport& r);
Metrics metrics_from_json(const nlohmann::json& j);
MetricsReport report_from_json(const nlohmann::json& j);

// Field-by-field comparison; numbers within `tolerance`.
bool reports_match(const MetricsReport& a, const MetricsReport& b, double tolerance = 1e-9);

// 0 success, 3 every episode failed on the backend, 4 nothing left after exclusion.
int exit_code_for(const MetricsReport& report);

}  // namespace beda::harness
