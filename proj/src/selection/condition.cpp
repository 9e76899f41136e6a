#include "beda/selection/condition.hpp"

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::selection {

std::string ConditionBlock::slot(const std::string& name) const {
  for (const auto& [k, v] : slots) {
    if (k == name) return v;
  }
  throw DomainError("condition block has no slot '" + name + "'");
}

GameTemplate game_template_from_string(const std::string& name) {
  if (name == "ckbg") return GameTemplate::kCkbg;
  if (name == "mf") return GameTemplate::kMf;
  if (name == "casino") return GameTemplate::kCasino;
  throw DomainError("unknown game template '" + name + "'");
}

namespace {

std::string casino_clause(const belief::Event& e, const ConditionRequest& request) {
  const std::string subject = e.payload_or("subject");
  const std::string polarity = e.payload_or("polarity", "is");
  const std::string clause = e.payload_or("clause");
  if (clause.empty()) throw DomainError("event " + std::to_string(e.id) + " is not a preference event");
  const std::string owner = subject == request.self_name ? "your" : subject + "'s";
  return owner + " preference " + polarity + ": " + clause;
}

}  // namespace

ConditionBlock compose_condition(const std::vector<std::size_t>& chosen,
                                 const belief::WorldSet& world_set,
                                 const ConditionRequest& request) {
  for (auto id : chosen) {
    if (id >= world_set.size()) {
      throw DomainError("chosen event " + std::to_string(id) + " is not in the world set");
    }
  }
  ConditionBlock block;
  if (chosen.empty()) {
    block.fallback = true;
    return block;
  }

  switch (request.game) {
    case GameTemplate::kCkbg: {
      std::vector<std::string> lines;
      for (auto id : chosen) lines.push_back("- " + world_set[id].text);
      block.text = join(lines, "\n");
      block.slots = {{"machine_U", block.text}};
      break;
    }
    case GameTemplate::kMf: {
      std::vector<std::string> pairs;
      for (auto id : chosen) {
        const auto& e = world_set[id];
        if (!belief::is_triple_event(e)) {
          throw DomainError("event " + std::to_string(id) + " is not an attribute/value event");
        }
        pairs.push_back(e.payload.at("attribute") + ": " + e.payload.at("value"));
      }
      block.text = join(pairs, ", ");
      block.slots = {{"belief_state_sentence", block.text}};
      break;
    }
    case GameTemplate::kCasino: {
      std::vector<std::string> self_parts;
      std::vector<std::string> opponent_parts;
      for (auto id : chosen) {
        const auto& e = world_set[id];
        auto& parts = e.payload_or("subject") == request.self_name ? self_parts : opponent_parts;
        parts.push_back(casino_clause(e, request));
      }
      const std::string self_slot = self_parts.empty() ? kNoSpecificBelief : join(self_parts, " and ");
      const std::string opponent_slot =
          opponent_parts.empty() ? kNoSpecificBelief : join(opponent_parts, " and ");
      block.slots = {{"belief_state_self", self_slot},
                     {"belief_state_opponent", opponent_slot},
                     {"belief_state_gt", request.ground_truth}};
      block.text = self_slot + "\n" + opponent_slot;
      break;
    }
  }
  return block;
}

}  // namespace beda::selection
