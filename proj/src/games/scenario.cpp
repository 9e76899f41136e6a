#include "beda/games/scenario.hpp"

#include "beda/errors.hpp"
#include "beda/jsonl.hpp"

namespace beda::games {

using nlohmann::json;

GameId game_of(const Scenario& s) {
  switch (s.index()) {
    case 0: return GameId::kCkbg;
    case 1: return GameId::kMf;
    default: return GameId::kCasino;
  }
}

json to_json(const Scenario& s) {
  json body = std::visit([](const auto& v) { return to_json(v); }, s);
  return json{{"schema_version", kDatasetSchemaVersion}, {"game", to_string(game_of(s))}, {"scenario", body}};
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object() || j.value("schema_version", 0) != kDatasetSchemaVersion) {
    throw DataError("unsupported dataset schema version");
  }
  const json& body = j.at("scenario");
  switch (game_from_string(j.at("game").get<std::string>())) {
    case GameId::kCkbg: return ckbg_setting_from_json(body);
    case GameId::kMf: return mf_scenario_from_json(body);
    case GameId::kCasino: return casino_scenario_from_json(body);
  }
  throw DataError("unknown game");
}

void save_dataset(const std::string& path, const std::vector<Scenario>& scenarios) {
  std::vector<json> docs;
  for (const auto& s : scenarios) docs.push_back(to_json(s));
  write_jsonl(path, docs);
}

std::vector<Scenario> load_dataset(const std::string& path, GameId game) {
  std::vector<Scenario> out;
  std::size_t line = 0;
  for (const auto& doc : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(scenario_from_json(doc));
    } catch (const Error& e) {
      throw LoadError(path + ": " + e.what(), line);
    } catch (const json::exception& e) {
      throw LoadError(path + ": " + e.what(), line);
    }
    if (game_of(out.back()) != game) {
      throw LoadError(path + ": scenario is not a " + std::string(to_string(game)) + " scenario", line);
    }
  }
  if (out.empty()) throw DataError("dataset " + path + " is empty");
  return out;
}

Scenario generate_scenario(GameId game, std::uint64_t seed, const WordLists& words) {
  switch (game) {
    case GameId::kCkbg:
      return ckbg_generate_dataset(1, ConditionCountDistribution::fixed(3), seed, words).settings.front();
    case GameId::kMf: return mf_generate_scenario(seed, words);
    case GameId::kCasino: return casino_generate_scenario(seed, words);
  }
  throw DomainError("unknown game");
}

}  // namespace beda::games
