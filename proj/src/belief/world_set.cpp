#include "beda/belief/world_set.hpp"

#include "beda/errors.hpp"

namespace beda::belief {

std::string Event::payload_or(const std::string& key, std::string fallback) const {
  auto it = payload.find(key);
  return it == payload.end() ? fallback : it->second;
}

WorldSet::WorldSet(std::vector<Event> events) : events_(std::move(events)) {
  if (events_.empty()) throw DomainError("world set is empty");
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].id != i) {
      throw DomainError("world set event at position " + std::to_string(i) +
                        " has id " + std::to_string(events_[i].id));
    }
    if (events_[i].text.empty()) {
      throw DomainError("world set event " + std::to_string(i) + " has empty text");
    }
  }
}

WorldSet WorldSet::from_texts(const std::vector<std::string>& texts) {
  std::vector<Event> events;
  events.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) events.push_back(Event{i, texts[i], {}});
  return WorldSet(std::move(events));
}

std::string_view to_string(Perspective p) {
  return p == Perspective::kSelfTruth ? "self_truth" : "opponent_knows";
}

Perspective perspective_from_string(std::string_view name) {
  if (name == "self_truth") return Perspective::kSelfTruth;
  if (name == "opponent_knows") return Perspective::kOpponentKnows;
  throw DomainError("unknown perspective '" + std::string(name) + "'");
}

std::string triple_event_text(const std::string& interlocutor,
                              const std::string& attribute, const std::string& value) {
  return "The " + interlocutor + " suspects the " + attribute +
         " of the mutual friend is " + value + ".";
}

Event make_triple_event(std::size_t id, const std::string& interlocutor,
                        const std::string& attribute, const std::string& value) {
  return Event{id,
               triple_event_text(interlocutor, attribute, value),
               {{"interlocutor", interlocutor}, {"attribute", attribute}, {"value", value}}};
}

bool is_triple_event(const Event& e) {
  return e.payload.count("attribute") && e.payload.count("value") &&
         e.payload.count("interlocutor");
}

}  // namespace beda::belief
