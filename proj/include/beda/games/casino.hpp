#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "json.hpp"

#include "beda/belief/estimator.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/games/episode.hpp"
#include "beda/games/wordlists.hpp"
#include "beda/generation/action.hpp"

namespace beda::games {

enum class Resource { kFood, kWater, kFirewood };

std::string_view to_string(Resource r);

// Most preferred first.
using Ranking = std::array<Resource, 3>;

// The six orderings in world-set order.
extern const std::array<Ranking, 6> kRankings;

std::string ranking_key(const Ranking& r);  // "water>firewood>food"
Ranking ranking_from_key(const std::string& key);
std::size_t ranking_index(const Ranking& r);
// "the most important thing is water, followed by firewood, and lastly food"
std::string ranking_clause(const Ranking& r);

struct RewardScheme {
  std::array<int, 3> points{5, 4, 3};  // per unit, by preference rank
  int stock = 3;                       // units per resource
};

int units_of(const generation::Deal& d, Resource r);

// Σ units × points of the resource's rank. Units outside 0..stock: DomainError.
int casino_reward(const Ranking& preference, const generation::Deal& deal, const RewardScheme& scheme = {});

// Every resource's two shares sum to the stock.
bool deals_complementary(const generation::Deal& a, const generation::Deal& b, int stock = 3);

struct CasinoScenario {
  std::array<std::string, 2> names;
  std::array<Ranking, 2> preferences;

  void validate() const;
  bool operator==(const CasinoScenario&) const = default;
};

nlohmann::json to_json(const CasinoScenario& s);
CasinoScenario casino_scenario_from_json(const nlohmann::json& j);
CasinoScenario casino_generate_scenario(std::uint64_t seed, const WordLists& words);

// 24 events: six assertive per negotiator, then six negated per negotiator.
// Payload: subject, polarity ("is"/"isn't"), ranking, clause.
belief::WorldSet casino_world_set(const std::string& name_1, const std::string& name_2);

inline constexpr std::size_t kCasinoPerSubject = 6;
std::size_t casino_event_id(std::size_t subject, std::size_t ranking, bool negated);

// True events of the world set.
belief::EventIdSet casino_truth(const CasinoScenario& s);
// What `side`'s opponent knows: the opponent's own true events.
belief::EventIdSet casino_opponent_knows(const CasinoScenario& s, std::size_t side);

// Oracle over the scenario: every true event for self_truth, nothing about
// the speaker for opponent knowledge.
std::shared_ptr<const belief::BeliefEstimator> casino_oracle(const CasinoScenario& s);

// Per-side vectors for mixed selection, assembled from the estimator's
// self_truth reading of the opponent's assertive events and its
// opponent_knows reading of the speaker's assertive events.
std::pair<belief::BeliefVector, belief::BeliefVector> casino_side_vectors(
    const CasinoScenario& s, std::size_t side, const belief::BeliefVector& est_self,
    const belief::BeliefVector& est_opp);

struct CasinoOptions {
  std::size_t max_turns = 10;
  RewardScheme rewards;
};

Episode casino_run_episode(const CasinoScenario& scenario, const AgentWiring& first,
                           const AgentWiring& second, const CasinoOptions& options = {});

// "fair": proposes, concedes one step per own turn, accepts a complement
// worth at least its current aspiration.
generation::GeneratorPtr casino_scripted_negotiator(const CasinoScenario& scenario, std::size_t side,
                                                    const std::string& policy = "fair");

}  // namespace beda::games
