#pragma once

#include <string>
#include <vector>

#include "beda/belief/world_set.hpp"

namespace beda::selection {

enum class GameTemplate { kCkbg, kMf, kCasino };

// What the conditional generator receives: the filled prompt slots and a
// display rendering. `fallback` means generate without any condition.
struct ConditionBlock {
  std::vector<std::pair<std::string, std::string>> slots;
  std::string text;
  bool fallback = false;

  std::string slot(const std::string& name) const;
};

struct ConditionRequest {
  GameTemplate game = GameTemplate::kCkbg;
  std::string self_name;
  std::string opponent_name;
  // CaSiNo only: the speaker's own true preference, fills [belief_state_gt].
  std::string ground_truth;
};

// Text used for a CaSiNo side whose selection fell back.
inline const std::string kNoSpecificBelief = "nothing specific";

// CKBG: bullet list of event texts for [machine_U].
// MF:   "Attribute: value, ..." for [belief_state_sentence].
// CaSiNo: [belief_state_self], [belief_state_opponent], [belief_state_gt].
ConditionBlock compose_condition(const std::vector<std::size_t>& chosen,
                                 const belief::WorldSet& world_set,
                                 const ConditionRequest& request);

GameTemplate game_template_from_string(const std::string& name);

}  // namespace beda::selection
