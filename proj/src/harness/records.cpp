#include "beda/harness/records.hpp"

#include <fstream>

#include "beda/errors.hpp"
#include "beda/jsonl.hpp"
#include "beda/util.hpp"

namespace beda::harness {

using nlohmann::json;

std::string EpisodeRecord::episode_id() const {
  return "r" + std::to_string(repetition) + "-e" + std::to_string(index);
}

bool EpisodeRecord::operator==(const EpisodeRecord& o) const { return to_json(*this) == to_json(o); }

json to_json(const EpisodeRecord& r) {
  return json{{"config_fingerprint", r.config_fingerprint},
              {"game", to_string(r.game)},
              {"method", games::to_string(r.method)},
              {"repetition", r.repetition},
              {"index", r.index},
              {"episode_seed", r.episode_seed},
              {"scenario", r.scenario},
              {"transcript", r.transcript},
              {"outcome", games::to_json(r.outcome)}};
}

EpisodeRecord record_from_json(const json& j) {
  EpisodeRecord r;
  r.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  r.game = game_from_string(j.at("game").get<std::string>());
  r.method = games::method_from_string(j.at("method").get<std::string>());
  r.repetition = j.at("repetition").get<std::size_t>();
  r.index = j.at("index").get<std::size_t>();
  r.episode_seed = j.at("episode_seed").get<std::uint64_t>();
  r.scenario = j.at("scenario");
  r.transcript = j.at("transcript");
  r.outcome = games::outcome_from_json(j.at("outcome"));
  return r;
}

void persist_records(const std::vector<EpisodeRecord>& records, const std::string& path) {
  std::vector<json> docs;
  for (const auto& r : records) docs.push_back(to_json(r));
  write_jsonl(path, docs);
}

std::vector<EpisodeRecord> load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<EpisodeRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw LoadError(path + ": " + e.what(), number);
    } catch (const Error& e) {
      throw LoadError(path + ": " + e.what(), number);
    }
  }
  return out;
}

}  // namespace beda::harness
