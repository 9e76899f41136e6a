#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "beda/game_id.hpp"
#include "beda/games/episode.hpp"

namespace beda::harness {

struct EpisodeRecord {
  std::string config_fingerprint;
  GameId game = GameId::kCkbg;
  games::Method method = games::Method::kBeda;
  std::size_t repetition = 0;
  std::size_t index = 0;
  std::uint64_t episode_seed = 0;
  nlohmann::json scenario;    // dataset line of the scenario played
  nlohmann::json transcript;  // null for infrastructure failures
  games::EpisodeOutcome outcome;

  std::string episode_id() const;
  bool operator==(const EpisodeRecord&) const;
};

nlohmann::json to_json(const EpisodeRecord& r);
EpisodeRecord record_from_json(const nlohmann::json& j);

void persist_records(const std::vector<EpisodeRecord>& records, const std::string& path);
// Malformed line: LoadError with its line number. Empty file: empty list.
std::vector<EpisodeRecord> load_records(const std::string& path);

}  // namespace beda::harness
