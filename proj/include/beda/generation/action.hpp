#pragma once

#include <string>
#include <vector>

#include "beda/game_id.hpp"

namespace beda::generation {

// Units a negotiator takes for itself.
struct Deal {
  int food = 0;
  int water = 0;
  int firewood = 0;

  bool operator==(const Deal&) const = default;
};

// Canonical "DEAL: food=a, water=b, firewood=c" line.
std::string render_deal(const Deal& deal);

struct ParsedAction {
  enum class Kind { kUtterance, kStopChoice, kFriendPick, kDeal, kFormatError };

  Kind kind = Kind::kUtterance;
  std::string container;         // kStopChoice
  std::size_t friend_index = 0;  // kFriendPick, 0-based in the speaker's list
  Deal deal;                     // kDeal
  std::string reason;            // kFormatError
};

std::string_view to_string(ParsedAction::Kind kind);

// Names the parser can resolve: CKBG containers and the speaker's MF
// friend list (one vector of attribute values per friend).
struct ActionVocabulary {
  std::vector<std::string> containers;
  std::vector<std::vector<std::string>> friends;
};

// kTerminal marks a reply that must carry a final choice (forced container
// choice, final friend selection).
enum class ActionPosition { kDialogue, kTerminal };

ParsedAction parse_action(GameId game, const std::string& text,
                          const ActionVocabulary& vocabulary,
                          ActionPosition position = ActionPosition::kDialogue);

inline constexpr std::string_view kStopToken = "[STOP]";
inline constexpr std::string_view kSelectToken = "SELECT:";

}  // namespace beda::generation
