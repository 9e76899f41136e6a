#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beda/belief/dialogue_context.hpp"
#include "beda/belief/estimator.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/games/episode.hpp"
#include "beda/games/wordlists.hpp"
#include "beda/generation/generator.hpp"

namespace beda::games {

struct MfFriend {
  std::vector<std::string> values;  // one per schema attribute

  bool operator==(const MfFriend&) const = default;
};

struct MfScenario {
  std::vector<std::string> attributes;
  std::array<std::string, 2> names;
  std::array<std::vector<MfFriend>, 2> lists;

  // Exactly one friend tuple occurs in both lists.
  void validate() const;
  // Position of the mutual friend in each list.
  std::array<std::size_t, 2> mutual_indices() const;
  std::string describe(const MfFriend& f) const;  // "School: x, Major: y"
  bool operator==(const MfScenario&) const = default;
};

nlohmann::json to_json(const MfScenario& s);
MfScenario mf_scenario_from_json(const nlohmann::json& j);

MfScenario mf_generate_scenario(std::uint64_t seed, const WordLists& words,
                                std::size_t friends_per_list = 5, std::size_t n_attributes = 3);

// One triple event per (attribute, value) seen in either list, attributes in
// schema order and values sorted; the interlocutor is the other player.
belief::WorldSet mf_world_events(const MfScenario& scenario, std::size_t owner);

// Triples the interlocutor has put forward: for each attribute, the values
// named in the interlocutor's latest turn that names any of its values.
belief::EventIdSet mf_truth(const MfScenario& scenario, std::size_t owner,
                            const belief::DialogueContext& context);

std::shared_ptr<const belief::BeliefEstimator> mf_oracle(const MfScenario& scenario);

// Latest turn index naming each event's value, if any.
std::vector<std::optional<std::size_t>> mf_recency(const belief::WorldSet& ws,
                                                   const belief::DialogueContext& context);

inline constexpr std::string_view kConfirmToken = "CONFIRM:";
inline constexpr std::size_t kMfDefaultMaxTurns = 20;
extern const std::string kMfFinalSelectionPrompt;
extern const std::string kMfJudgeInstruction;

// Rule judge: the last two spoken turns both carry the confirmation token.
bool mf_judge(const belief::DialogueContext& context);

struct MfJudgeVerdict {
  bool identified = false;
  bool malformed = false;  // reply was neither yes nor no
  generation::Prompt prompt;
  generation::Utterance reply;
};

// Generator judge: a yes/no question over the rendered dialogue.
MfJudgeVerdict mf_judge(const generation::Generator& judge, const belief::DialogueContext& context);

struct MfOptions {
  std::size_t max_turns = kMfDefaultMaxTurns;
  generation::GeneratorPtr judge;  // null: rule judge
};

// Player A opens; each turn conditions on the speaker's alignment selection,
// one value per attribute. After a confirmed identification or the turn
// limit, both players answer the final-selection prompt.
Episode mf_run_episode(const MfScenario& scenario, const AgentWiring& a, const AgentWiring& b,
                       const MfOptions& options = {});

std::string mf_speaker(const MfScenario& s, std::size_t side);

// Scripted player: "cooperative" narrows candidates one attribute per turn
// and confirms once a single candidate is left.
generation::GeneratorPtr mf_scripted_player(const MfScenario& scenario, std::size_t side,
                                            const std::string& policy = "cooperative");

}  // namespace beda::games
