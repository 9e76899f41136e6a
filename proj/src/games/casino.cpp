#include "beda/games/casino.hpp"

#include <algorithm>

#include "beda/errors.hpp"
#include "beda/generation/baseline_templates.hpp"
#include "beda/util.hpp"

namespace beda::games {

using belief::EventIdSet;
using belief::Perspective;
using generation::Deal;
using nlohmann::json;

const std::array<Ranking, 6> kRankings = {{
    {Resource::kWater, Resource::kFirewood, Resource::kFood},
    {Resource::kWater, Resource::kFood, Resource::kFirewood},
    {Resource::kFirewood, Resource::kWater, Resource::kFood},
    {Resource::kFirewood, Resource::kFood, Resource::kWater},
    {Resource::kFood, Resource::kWater, Resource::kFirewood},
    {Resource::kFood, Resource::kFirewood, Resource::kWater},
}};

namespace {

constexpr std::array<Resource, 3> kResources{Resource::kFood, Resource::kWater, Resource::kFirewood};

Deal deal_from_ranking(const Ranking& r, const std::array<int, 3>& by_rank) {
  Deal d;
  for (std::size_t i = 0; i < 3; ++i) {
    switch (r[i]) {
      case Resource::kFood: d.food = by_rank[i]; break;
      case Resource::kWater: d.water = by_rank[i]; break;
      case Resource::kFirewood: d.firewood = by_rank[i]; break;
    }
  }
  return d;
}

std::string background(const CasinoScenario& s, std::size_t side) {
  const Ranking& r = s.preferences[side];
  return "You are " + s.names[side] + ", a camper negotiating with " + s.names[1 - side] +
         " over 3 packages each of food, water and firewood. For you, " + ranking_clause(r) +
         ". Try to get the items that matter most to you. To propose or accept a split, add a line "
         "\"DEAL: food=<n>, water=<n>, firewood=<n>\" with the units you take for yourself.";
}

}  // namespace

std::string_view to_string(Resource r) {
  switch (r) {
    case Resource::kFood: return "food";
    case Resource::kWater: return "water";
    case Resource::kFirewood: return "firewood";
  }
  return "unknown";
}

std::string ranking_key(const Ranking& r) {
  return std::string(to_string(r[0])) + ">" + std::string(to_string(r[1])) + ">" + std::string(to_string(r[2]));
}

std::size_t ranking_index(const Ranking& r) {
  const auto it = std::find(kRankings.begin(), kRankings.end(), r);
  if (it == kRankings.end()) throw DomainError("not a preference ordering");
  return static_cast<std::size_t>(it - kRankings.begin());
}

Ranking ranking_from_key(const std::string& key) {
  for (const auto& r : kRankings) {
    if (ranking_key(r) == key) return r;
  }
  throw DomainError("unknown preference ordering: " + key);
}

std::string ranking_clause(const Ranking& r) {
  return "the most important thing is " + std::string(to_string(r[0])) + ", followed by " +
         std::string(to_string(r[1])) + ", and lastly " + std::string(to_string(r[2]));
}

int units_of(const Deal& d, Resource r) {
  switch (r) {
    case Resource::kFood: return d.food;
    case Resource::kWater: return d.water;
    case Resource::kFirewood: return d.firewood;
  }
  return 0;
}

int casino_reward(const Ranking& preference, const Deal& deal, const RewardScheme& scheme) {
  ranking_index(preference);
  int total = 0;
  for (std::size_t rank = 0; rank < 3; ++rank) {
    const int units = units_of(deal, preference[rank]);
    if (units < 0 || units > scheme.stock) {
      throw DomainError(std::string(to_string(preference[rank])) + " units out of range: " + std::to_string(units));
    }
    total += units * scheme.points[rank];
  }
  return total;
}

bool deals_complementary(const Deal& a, const Deal& b, int stock) {
  for (Resource r : kResources) {
    if (units_of(a, r) + units_of(b, r) != stock) return false;
  }
  return true;
}

void CasinoScenario::validate() const {
  if (names[0].empty() || names[1].empty() || names[0] == names[1]) {
    throw DomainError("negotiators need two distinct names");
  }
  for (const auto& p : preferences) ranking_index(p);
}

json to_json(const CasinoScenario& s) {
  return json{{"names", s.names},
              {"preferences", {ranking_key(s.preferences[0]), ranking_key(s.preferences[1])}}};
}

CasinoScenario casino_scenario_from_json(const json& j) {
  CasinoScenario s;
  try {
    s.names = j.at("names").get<std::array<std::string, 2>>();
    const auto prefs = j.at("preferences").get<std::array<std::string, 2>>();
    s.preferences = {ranking_from_key(prefs[0]), ranking_from_key(prefs[1])};
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed CaSiNo scenario: ") + e.what());
  } catch (const DomainError& e) {
    throw DataError(std::string("malformed CaSiNo scenario: ") + e.what());
  }
  s.validate();
  return s;
}

CasinoScenario casino_generate_scenario(std::uint64_t seed, const WordLists& words) {
  if (words.names.size() < 2) throw DataError("need at least two names");
  Rng rng(seed);
  CasinoScenario s;
  const std::size_t n0 = uniform_index(rng, words.names.size());
  std::size_t n1 = uniform_index(rng, words.names.size() - 1);
  if (n1 >= n0) ++n1;
  s.names = {words.names[n0], words.names[n1]};
  s.preferences = {kRankings[uniform_index(rng, 6)], kRankings[uniform_index(rng, 6)]};
  return s;
}

std::size_t casino_event_id(std::size_t subject, std::size_t ranking, bool negated) {
  if (subject > 1 || ranking >= kCasinoPerSubject) throw DomainError("preference event out of range");
  return (negated ? 2 * kCasinoPerSubject : 0) + subject * kCasinoPerSubject + ranking;
}

belief::WorldSet casino_world_set(const std::string& name_1, const std::string& name_2) {
  if (name_1 == name_2) throw DomainError("negotiator names must differ");
  std::vector<belief::Event> events;
  for (const char* polarity : {"is", "isn't"}) {
    for (const std::string* name : {&name_1, &name_2}) {
      for (const auto& r : kRankings) {
        const std::string clause = ranking_clause(r);
        events.push_back(belief::Event{events.size(),
                                       "The " + *name + "'s preference " + polarity + ": " + clause + ".",
                                       {{"subject", *name},
                                        {"polarity", polarity},
                                        {"ranking", ranking_key(r)},
                                        {"clause", clause}}});
      }
    }
  }
  return belief::WorldSet(std::move(events));
}

EventIdSet casino_truth(const CasinoScenario& s) {
  EventIdSet truth;
  for (std::size_t side = 0; side < 2; ++side) {
    const std::size_t own = ranking_index(s.preferences[side]);
    for (std::size_t r = 0; r < kCasinoPerSubject; ++r) truth.insert(casino_event_id(side, r, r != own));
  }
  return truth;
}

EventIdSet casino_opponent_knows(const CasinoScenario& s, std::size_t side) {
  const std::size_t other = 1 - side;
  const std::size_t own = ranking_index(s.preferences[other]);
  EventIdSet out;
  for (std::size_t r = 0; r < kCasinoPerSubject; ++r) out.insert(casino_event_id(other, r, r != own));
  return out;
}

std::shared_ptr<const belief::BeliefEstimator> casino_oracle(const CasinoScenario& s) {
  const EventIdSet truth = casino_truth(s);
  return std::make_shared<belief::OracleEstimator>(
      [truth](const belief::DialogueContext&, const belief::WorldSet& ws, Perspective p) {
        if (ws.size() != 2 * 2 * kCasinoPerSubject) throw DomainError("not a CaSiNo world set");
        return p == Perspective::kSelfTruth ? truth : EventIdSet{};
      });
}

std::pair<belief::BeliefVector, belief::BeliefVector> casino_side_vectors(
    const CasinoScenario& s, std::size_t side, const belief::BeliefVector& est_self,
    const belief::BeliefVector& est_opp) {
  const std::size_t n = 4 * kCasinoPerSubject;
  if (est_self.size() != n || est_opp.size() != n) throw DomainError("CaSiNo vectors need 24 entries");
  const std::size_t other = 1 - side;
  const std::size_t own = ranking_index(s.preferences[side]);
  std::vector<double> self(n), opp(n);
  std::array<double, kCasinoPerSubject> q{};
  double q_total = 0.0;
  for (std::size_t r = 0; r < kCasinoPerSubject; ++r) {
    q[r] = est_opp[casino_event_id(side, r, false)];
    q_total += q[r];
  }
  for (std::size_t r = 0; r < kCasinoPerSubject; ++r) {
    const double p = est_self[casino_event_id(other, r, false)];
    self[casino_event_id(side, r, false)] = r == own ? 1.0 : 0.0;
    self[casino_event_id(side, r, true)] = r == own ? 0.0 : 1.0;
    self[casino_event_id(other, r, false)] = p;
    self[casino_event_id(other, r, true)] = 1.0 - p;
    opp[casino_event_id(other, r, false)] = p;
    opp[casino_event_id(other, r, true)] = 1.0 - p;
    opp[casino_event_id(side, r, false)] = q[r];
    opp[casino_event_id(side, r, true)] = std::min(1.0, q_total - q[r]);
  }
  return {belief::BeliefVector(Perspective::kSelfTruth, std::move(self)),
          belief::BeliefVector(Perspective::kOpponentKnows, std::move(opp))};
}

Episode casino_run_episode(const CasinoScenario& scenario, const AgentWiring& first,
                           const AgentWiring& second, const CasinoOptions& options) {
  scenario.validate();
  if (options.max_turns == 0) throw DomainError("max_turns must be at least 1");
  const std::array<const AgentWiring*, 2> agents{&first, &second};
  const belief::WorldSet ws = casino_world_set(scenario.names[0], scenario.names[1]);
  const std::array<std::string, 2> bg{background(scenario, 0), background(scenario, 1)};
  const std::array<std::string, 2> roles{"negotiator_1", "negotiator_2"};

  detail::EpisodeLog log(GameId::kCasino, "Split 3 packages each of food, water and firewood between " +
                                              scenario.names[0] + " and " + scenario.names[1] + ".");
  std::array<std::optional<Deal>, 2> latest;
  bool agreed = false;

  while (!agreed && log.outcome().turns < options.max_turns) {
    const std::size_t side = log.outcome().turns % 2;
    const auto& wiring = *agents[side];
    const auto ctx = log.context_for(bg[side]);

    detail::Conditioning cond;
    if (uses_estimator(wiring.method)) {
      if (!wiring.estimator) throw ConfigError("method needs an estimator");
      const auto est_self = wiring.estimator->estimate(ctx, ws, Perspective::kSelfTruth);
      const auto est_opp = wiring.estimator->estimate(ctx, ws, Perspective::kOpponentKnows);
      auto [self, opp] = casino_side_vectors(scenario, side, est_self, est_opp);
      if (wiring.method == Method::kMindDial) {
        cond.extra_block = std::string(generation::baseline_templates::kBeliefListHeader) + "\n" +
                           generation::minddial_condition(self, opp, ws);
      } else {
        const auto mixed =
            selection::mixed_select(self, opp, wiring.epsilon, derive_seed(wiring.seed, log.outcome().turns));
        std::vector<std::size_t> chosen = mixed.alignment.chosen;
        chosen.insert(chosen.end(), mixed.adversarial.chosen.begin(), mixed.adversarial.chosen.end());
        const selection::ConditionRequest creq{selection::GameTemplate::kCasino, scenario.names[side],
                                               scenario.names[1 - side],
                                               ranking_clause(scenario.preferences[side]) + "."};
        cond.condition = selection::compose_condition(chosen, ws, creq);
        cond.selections = {mixed.alignment, mixed.adversarial};
        cond.selected = true;
        cond.fallback = chosen.empty();
      }
      cond.self_truth = std::move(self);
      cond.opp_knows = std::move(opp);
    }

    generation::PromptRequest req;
    req.game = GameId::kCasino;
    req.role = roles[side];
    req.self_name = scenario.names[side];
    req.background = bg[side];
    req.condition = cond.condition;
    req.extra_block = cond.extra_block;
    req.slots = {{"opponent_name", scenario.names[1 - side]}};
    const auto u = detail::run_generation(log, wiring, scenario.names[side], "turn", req, ctx, cond);
    if (!u.format_ok) {
      log.outcome().format_error = true;
      break;
    }
    log.add_turn(static_cast<int>(side), scenario.names[side], u);
    const auto action = generation::parse_action(GameId::kCasino, u.text, {});
    if (action.kind == generation::ParsedAction::Kind::kFormatError) {
      log.outcome().format_error = true;
      log.outcome().error = action.reason;
      break;
    }
    if (action.kind == generation::ParsedAction::Kind::kDeal) latest[side] = action.deal;
    agreed = latest[0] && latest[1] && deals_complementary(*latest[0], *latest[1], options.rewards.stock);
  }

  if (agreed && !log.outcome().format_error) {
    log.outcome().success = true;
    log.outcome().rewards = std::array<double, 2>{
        static_cast<double>(casino_reward(scenario.preferences[0], *latest[0], options.rewards)),
        static_cast<double>(casino_reward(scenario.preferences[1], *latest[1], options.rewards))};
  }

  const std::size_t n_turns = log.dialogue().turns.size();
  for (std::size_t side = 0; side < 2; ++side) {
    const belief::TruthSnapshot snap{{Perspective::kSelfTruth, casino_truth(scenario)},
                                     {Perspective::kOpponentKnows, casino_opponent_knows(scenario, side)}};
    log.transcript().views.push_back(
        TruthView{roles[side], bg[side], ws, std::vector<belief::TruthSnapshot>(n_turns + 1, snap)});
  }
  return log.finish();
}

generation::GeneratorPtr casino_scripted_negotiator(const CasinoScenario& scenario, std::size_t side,
                                                    const std::string& policy) {
  if (policy != "fair") throw ConfigError("unknown CaSiNo negotiator policy: " + policy);
  if (side > 1) throw DomainError("CaSiNo side must be 0 or 1");
  const Ranking pref = scenario.preferences[side];
  auto fn = [pref](const generation::Prompt& prompt) -> std::string {
    static const std::array<std::array<int, 3>, 4> kOffers{{{3, 1, 0}, {2, 2, 0}, {2, 1, 1}, {1, 2, 1}}};
    const std::size_t k = prompt.key.turn_index;
    const int aspiration = casino_reward(pref, deal_from_ranking(pref, kOffers[0])) - static_cast<int>(k);
    std::optional<Deal> offered;
    for (const auto& line : detail::opponent_lines(prompt)) {
      const auto a = generation::parse_action(GameId::kCasino, line, {});
      if (a.kind == generation::ParsedAction::Kind::kDeal) offered = a.deal;
    }
    if (offered) {
      const Deal rest{3 - offered->food, 3 - offered->water, 3 - offered->firewood};
      const bool valid = rest.food >= 0 && rest.water >= 0 && rest.firewood >= 0;
      if (valid && casino_reward(pref, rest) >= aspiration) {
        return "That works for me.\n" + generation::render_deal(rest);
      }
    }
    const Deal ask = deal_from_ranking(pref, kOffers[std::min(k, kOffers.size() - 1)]);
    return "I need " + std::string(to_string(pref[0])) + " the most. How about this?\n" +
           generation::render_deal(ask);
  };
  return std::make_shared<generation::ScriptedGenerator>(std::map<generation::ScriptedGenerator::Key, std::string>{},
                                                         detail::wrapper_aware(fn));
}

}  // namespace beda::games
