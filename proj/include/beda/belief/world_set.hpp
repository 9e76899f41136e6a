#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace beda::belief {

// A boolean proposition the agents reason about. `payload` carries
// game-specific structure (condition class, attribute, value, ...).
struct Event {
  std::size_t id = 0;
  std::string text;
  std::map<std::string, std::string> payload;

  bool operator==(const Event&) const = default;
  std::string payload_or(const std::string& key, std::string fallback = {}) const;
};

class WorldSet {
 public:
  WorldSet() = default;
  // Ids must be 0..n-1 in order and texts non-empty.
  explicit WorldSet(std::vector<Event> events);
  static WorldSet from_texts(const std::vector<std::string>& texts);

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t id) const { return events_.at(id); }
  const std::vector<Event>& events() const { return events_; }

  bool operator==(const WorldSet&) const = default;

 private:
  std::vector<Event> events_;
};

enum class Perspective { kSelfTruth, kOpponentKnows };

std::string_view to_string(Perspective p);
Perspective perspective_from_string(std::string_view name);

// Surface form shared by triple-style (attribute/value) world sets.
std::string triple_event_text(const std::string& interlocutor,
                              const std::string& attribute,
                              const std::string& value);

// Builds a triple-style event; payload keys: interlocutor, attribute, value.
Event make_triple_event(std::size_t id, const std::string& interlocutor,
                        const std::string& attribute, const std::string& value);

bool is_triple_event(const Event& e);

}  // namespace beda::belief
