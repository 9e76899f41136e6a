#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/epistemic/dialogue_acts.hpp"

namespace beda::selection {

using belief::BeliefVector;
using belief::EventIdSet;
using epistemic::ActKind;

inline constexpr double kDefaultEpsilon = 0.5;

struct ActConstraint {
  ActKind act = ActKind::kAdversarial;
  double epsilon = kDefaultEpsilon;

  ActConstraint() = default;
  ActConstraint(ActKind a, double eps);
};

class SelectionPolicy {
 public:
  enum class Kind { kAll, kUniformOne, kUniformK };

  static SelectionPolicy all() { return SelectionPolicy(Kind::kAll, 0); }
  static SelectionPolicy uniform_one() { return SelectionPolicy(Kind::kUniformOne, 1); }
  static SelectionPolicy uniform_k(std::size_t k);

  Kind kind() const { return kind_; }
  std::size_t k() const { return k_; }
  std::string to_string() const;
  static SelectionPolicy parse(const std::string& text);

  bool operator==(const SelectionPolicy&) const = default;

 private:
  SelectionPolicy(Kind kind, std::size_t k) : kind_(kind), k_(k) {}
  Kind kind_;
  std::size_t k_;
};

struct SelectionResult {
  EventIdSet feasible;
  std::vector<std::size_t> chosen;
  // Nothing was feasible; the caller generates without a condition.
  bool fallback = false;

  bool operator==(const SelectionResult&) const = default;
};

// Events passing both ε-constraints of the requested act, read off the
// estimator vectors:
//   adversarial: self[i] ≥ 1−ε and 1 − opp[i] ≥ 1−ε
//   alignment:   self[i] ≥ 1−ε and opp[i] ≥ 1−ε
EventIdSet feasible_set(const BeliefVector& self_truth, const BeliefVector& opp_knows,
                        const ActConstraint& constraint);

// Picks conditioning events from the feasible set. Uniform policies give
// every feasible event the same probability.
SelectionResult choose(const EventIdSet& feasible, const SelectionPolicy& policy,
                       std::uint64_t seed);

inline constexpr std::size_t kMixedWorldSetSize = 24;

struct MixedSelection {
  SelectionResult alignment;    // drawn from events 0..11
  SelectionResult adversarial;  // drawn from events 12..23
};

// One alignment event among the assertive half and one adversarial event
// among the negated half of a 24-event preference world set.
MixedSelection mixed_select(const BeliefVector& self_truth,
                            const BeliefVector& opp_knows_of_self, double epsilon,
                            std::uint64_t seed);

// Keeps at most one chosen event per value of payload[key]; among events
// sharing a key the one with the highest recency wins (ties: lowest id).
// Events without recency rank below every event that has one.
std::vector<std::size_t> dedupe_by_payload_key(
    const std::vector<std::size_t>& chosen, const belief::WorldSet& world_set,
    const std::string& key, const std::vector<std::optional<std::size_t>>& recency);

}  // namespace beda::selection
