#include "beda/generation/prompt.hpp"

#include <cctype>

#include "beda/errors.hpp"

namespace beda::generation {

const std::string_view kCkbgNoticeTemplate =
    "Notice:\n"
    "1. Context: [context]\n"
    "2. Your opponent's belief state: [user_U]\n"
    "3. Your belief state: [machine_U]\n"
    "Based on the context, the opponent's belief state, and your belief state to provide "
    "your final choice to the following task: [task].";

// "whether there a friend ... that meet" is the original wording.
const std::string_view kMfNoticeTemplate =
    "Notice:\n"
    "1. [name_opponent] currently considers the attributes of the mutual friend to be: "
    "**[belief_state_sentence].**\n"
    "2. You must confirm whether there a friend in your friend list that meet the above "
    "criteria; only then can they be identified as a mutual friend.\n"
    "3. When describing a friend, give all his attribute values.\n"
    "Please provide your utterance directly.";

// "thinks think" is the original wording.
const std::string_view kCasinoNoticeTemplate =
    "Notice:\n"
    "1. [opponent_name] thinks that you think [belief_state_self].\n"
    "2. [opponent_name] thinks think [belief_state_opponent].\n"
    "3. In fact, for you, [belief_state_gt]\n"
    "Please provide your utterance directly.";

std::string_view to_string(PromptRole role) {
  switch (role) {
    case PromptRole::kInterlocutor:
      return "interlocutor";
    case PromptRole::kSelf:
      return "self";
    case PromptRole::kSystem:
      return "system";
  }
  return "system";
}

nlohmann::json to_json(const Prompt& prompt) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& t : prompt.turns) {
    turns.push_back({{"role", std::string(to_string(t.role))}, {"text", t.text}});
  }
  return {{"system", prompt.system},
          {"turns", std::move(turns)},
          {"key",
           {{"game", std::string(to_string(prompt.key.game))},
            {"role", prompt.key.role},
            {"turn_index", prompt.key.turn_index},
            {"stage", prompt.key.stage}}}};
}

std::string_view notice_template(GameId game) {
  switch (game) {
    case GameId::kCkbg:
      return kCkbgNoticeTemplate;
    case GameId::kMf:
      return kMfNoticeTemplate;
    case GameId::kCasino:
      return kCasinoNoticeTemplate;
  }
  throw TemplateError("no notice template for game");
}

std::string fill_template(std::string_view tmpl,
                          const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(tmpl.size() * 2);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '[') {
      std::size_t j = i + 1;
      while (j < tmpl.size() &&
             (std::isalnum(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_')) {
        ++j;
      }
      if (j < tmpl.size() && tmpl[j] == ']' && j > i + 1) {
        const std::string name(tmpl.substr(i + 1, j - i - 1));
        auto it = slots.find(name);
        if (it == slots.end()) {
          throw TemplateError("template slot [" + name + "] has no value");
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out.push_back(tmpl[i]);
    ++i;
  }
  return out;
}

Prompt render_prompt(const PromptRequest& request, const belief::DialogueContext& context) {
  Prompt prompt;
  prompt.system = request.background;

  const bool conditioned = request.condition && !request.condition->fallback;
  if (conditioned) {
    std::map<std::string, std::string> slots = request.slots;
    for (const auto& [k, v] : request.condition->slots) slots[k] = v;
    const std::string notice = fill_template(notice_template(request.game), slots);
    prompt.system += prompt.system.empty() ? notice : "\n\n" + notice;
  } else if (!request.extra_block.empty()) {
    prompt.system += prompt.system.empty() ? request.extra_block : "\n\n" + request.extra_block;
  }
  if (prompt.system.empty()) throw TemplateError("prompt has an empty system text");

  std::size_t own_turns = 0;
  for (const auto& t : context.turns) {
    PromptRole role = PromptRole::kInterlocutor;
    if (t.speaker == request.self_name) {
      role = PromptRole::kSelf;
      ++own_turns;
    } else if (t.speaker == belief::kSystemSpeaker) {
      role = PromptRole::kSystem;
    }
    prompt.turns.push_back(PromptTurn{role, t.text});
  }
  prompt.key = PromptKey{request.game, request.role, own_turns, ""};
  return prompt;
}

}  // namespace beda::generation
