#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "beda/belief/dialogue_context.hpp"
#include "beda/game_id.hpp"
#include "beda/selection/condition.hpp"

namespace beda::generation {

enum class PromptRole { kInterlocutor, kSelf, kSystem };

std::string_view to_string(PromptRole role);

struct PromptTurn {
  PromptRole role;
  std::string text;

  bool operator==(const PromptTurn&) const = default;
};

// Identifies a generation request for scripted lookup: which game, which
// role, the role's own turn ordinal, and the wrapper stage ("" when none).
struct PromptKey {
  GameId game = GameId::kCkbg;
  std::string role;
  std::size_t turn_index = 0;
  std::string stage;

  bool operator==(const PromptKey&) const = default;
};

struct Prompt {
  std::string system;
  std::vector<PromptTurn> turns;
  PromptKey key;

  bool operator==(const Prompt&) const = default;
};

nlohmann::json to_json(const Prompt& prompt);

// Notice templates, verbatim; [name] marks a slot.
extern const std::string_view kCkbgNoticeTemplate;
extern const std::string_view kMfNoticeTemplate;
extern const std::string_view kCasinoNoticeTemplate;

std::string_view notice_template(GameId game);

// Replaces every [identifier] placeholder in one pass. A placeholder
// without a slot value is a TemplateError naming it.
std::string fill_template(std::string_view tmpl,
                          const std::map<std::string, std::string>& slots);

struct PromptRequest {
  GameId game = GameId::kCkbg;
  std::string role;       // "keeper", "burglar", "player", "negotiator"
  std::string self_name;  // speaker name of this agent in the context
  // Role background; becomes the head of the system text.
  std::string background;
  // Selected events. Absent or fallback: the notice block is omitted.
  std::optional<selection::ConditionBlock> condition;
  // Non-condition slots of the notice template (context, task, user_U,
  // name_opponent, opponent_name, ...).
  std::map<std::string, std::string> slots;
  // Free-form block appended instead of the notice (unconstrained
  // all-belief conditioning).
  std::string extra_block;
};

// System text = background [+ filled notice | + extra block]. Turns map
// the agent's own lines to kSelf, SYSTEM lines to kSystem and everything
// else to kInterlocutor.
Prompt render_prompt(const PromptRequest& request, const belief::DialogueContext& context);

}  // namespace beda::generation
