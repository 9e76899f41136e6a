#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "beda/game_id.hpp"
#include "beda/games/casino.hpp"
#include "beda/games/ckbg.hpp"
#include "beda/games/mf.hpp"

namespace beda::games {

inline constexpr int kDatasetSchemaVersion = 1;

using Scenario = std::variant<CkbgSetting, MfScenario, CasinoScenario>;

GameId game_of(const Scenario& s);

// {"schema_version", "game", "scenario"}.
nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

void save_dataset(const std::string& path, const std::vector<Scenario>& scenarios);
// Every line must carry the supported schema version and `game`.
std::vector<Scenario> load_dataset(const std::string& path, GameId game);

// One scenario from a seed. CKBG settings carry three conditions.
Scenario generate_scenario(GameId game, std::uint64_t seed, const WordLists& words);

}  // namespace beda::games
