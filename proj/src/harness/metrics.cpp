#include "beda/harness/metrics.hpp"

#include <cmath>
#include <map>

#include "beda/errors.hpp"
#include "beda/generation/baseline_templates.hpp"

namespace beda::harness {

using nlohmann::json;

namespace {

std::optional<double> ratio(std::optional<double> num, std::optional<double> den) {
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

std::optional<double> mean_of(const std::vector<Metrics>& reps, std::optional<double> Metrics::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& m : reps) {
    if (m.*field) {
      sum += *(m.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

constexpr std::pair<const char*, std::optional<double> Metrics::*> kRates[] = {
    {"success_rate", &Metrics::success_rate},   {"avg_turns", &Metrics::avg_turns},
    {"avg_tokens", &Metrics::avg_tokens},       {"sr_per_turn", &Metrics::sr_per_turn},
    {"sr_per_token", &Metrics::sr_per_token},   {"agreement_rate", &Metrics::agreement_rate},
    {"mean_reward", &Metrics::mean_reward},     {"fallback_rate", &Metrics::fallback_rate},
};

constexpr std::pair<const char*, std::size_t Metrics::*> kCounts[] = {
    {"episodes", &Metrics::episodes},
    {"valid", &Metrics::valid},
    {"format_errors", &Metrics::format_errors},
    {"infra_failures", &Metrics::infra_failures},
    {"successes", &Metrics::successes},
    {"selection_steps", &Metrics::selection_steps},
    {"fallbacks", &Metrics::fallbacks},
};

}  // namespace

Metrics metrics_for(GameId game, const std::vector<games::EpisodeOutcome>& outcomes) {
  Metrics m;
  double turns = 0.0;
  double tokens = 0.0;
  double reward_sum = 0.0;
  std::size_t rewarded = 0;
  for (const auto& o : outcomes) {
    if (o.game != game) throw DomainError("outcomes mix games");
    ++m.episodes;
    if (o.infra_failed) {
      ++m.infra_failures;
      continue;
    }
    if (o.format_error) {
      ++m.format_errors;
      continue;
    }
    ++m.valid;
    if (o.success) ++m.successes;
    turns += static_cast<double>(o.turns);
    tokens += static_cast<double>(o.total_tokens());
    m.selection_steps += o.selection_steps;
    m.fallbacks += o.fallback_count;
    if (o.success && o.rewards) {
      reward_sum += ((*o.rewards)[0] + (*o.rewards)[1]) / 2.0;
      ++rewarded;
    }
  }
  if (m.valid > 0) {
    const double valid = static_cast<double>(m.valid);
    m.success_rate = 100.0 * static_cast<double>(m.successes) / valid;
    m.avg_turns = turns / valid;
    m.avg_tokens = tokens / valid;
    m.sr_per_turn = ratio(m.success_rate, m.avg_turns);
    m.sr_per_token = ratio(m.success_rate, m.avg_tokens);
    if (game == GameId::kCasino) {
      m.agreement_rate = static_cast<double>(m.successes) / valid;
      if (rewarded > 0) m.mean_reward = reward_sum / static_cast<double>(rewarded);
    }
  }
  if (m.selection_steps > 0) {
    m.fallback_rate = static_cast<double>(m.fallbacks) / static_cast<double>(m.selection_steps);
  }
  return m;
}

MetricsReport compute_metrics(const std::vector<EpisodeRecord>& records) {
  if (records.empty()) throw DomainError("no records to aggregate");
  return compute_metrics(records, records.front().game);
}

MetricsReport compute_metrics(const std::vector<EpisodeRecord>& records, GameId game) {
  std::map<std::size_t, std::vector<games::EpisodeOutcome>> by_rep;
  for (const auto& r : records) {
    if (r.game != game || r.outcome.game != game) throw DomainError("records mix game ids");
    by_rep[r.repetition].push_back(r.outcome);
  }
  MetricsReport report;
  report.game = game;
  for (const auto& [rep, outcomes] : by_rep) report.repetitions.push_back(metrics_for(game, outcomes));
  for (const auto& m : report.repetitions) {
    for (const auto& [name, field] : kCounts) report.mean.*field += m.*field;
  }
  for (const auto& [name, field] : kRates) report.mean.*field = mean_of(report.repetitions, field);
  return report;
}

json to_json(const Metrics& m) {
  json j = json::object();
  for (const auto& [name, field] : kCounts) j[name] = m.*field;
  for (const auto& [name, field] : kRates) j[name] = (m.*field) ? json(*(m.*field)) : json(nullptr);
  return j;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  for (const auto& [name, field] : kCounts) m.*field = j.at(name).get<std::size_t>();
  for (const auto& [name, field] : kRates) {
    if (!j.at(name).is_null()) m.*field = j.at(name).get<double>();
  }
  return m;
}

json to_json(const MetricsReport& r) {
  json reps = json::array();
  for (const auto& m : r.repetitions) reps.push_back(to_json(m));
  return json{{"game", to_string(r.game)},
              {"repetitions", reps},
              {"mean", to_json(r.mean)},
              {"metadata",
               {{"success_rate_unit", "percent"},
                {"agreement_rate_unit", "fraction"},
                {"turn_unit", "one utterance by either side"},
                {"token_count", "whitespace tokens, both sides summed"},
                {"mean_reward", "mean of both sides' points, agreeing episodes only"},
                {"excluded", "format errors and infrastructure failures"},
                {"baseline_templates", std::string(generation::baseline_templates::kVersion)}}}};
}

MetricsReport report_from_json(const json& j) {
  MetricsReport r;
  r.game = game_from_string(j.at("game").get<std::string>());
  for (const auto& m : j.at("repetitions")) r.repetitions.push_back(metrics_from_json(m));
  r.mean = metrics_from_json(j.at("mean"));
  return r;
}

bool reports_match(const MetricsReport& a, const MetricsReport& b, double tolerance) {
  auto same = [&](const Metrics& x, const Metrics& y) {
    for (const auto& [name, field] : kCounts) {
      if (x.*field != y.*field) return false;
    }
    for (const auto& [name, field] : kRates) {
      const auto& u = x.*field;
      const auto& v = y.*field;
      if (u.has_value() != v.has_value()) return false;
      if (u && std::abs(*u - *v) > tolerance) return false;
    }
    return true;
  };
  if (a.game != b.game || a.repetitions.size() != b.repetitions.size()) return false;
  for (std::size_t i = 0; i < a.repetitions.size(); ++i) {
    if (!same(a.repetitions[i], b.repetitions[i])) return false;
  }
  return same(a.mean, b.mean);
}

int exit_code_for(const MetricsReport& report) {
  if (report.all_infra_failed()) return 3;
  if (report.empty_after_exclusion()) return 4;
  return 0;
}

}  // namespace beda::harness
