#include "beda/games/mf.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "beda/errors.hpp"
#include "beda/generation/action.hpp"
#include "beda/util.hpp"

namespace beda::games {

using belief::EventIdSet;
using nlohmann::json;

namespace {

constexpr std::size_t kSideA = 0;

// Whole-word, case-insensitive occurrence of `value` in `text`.
bool mentions(const std::string& text, const std::string& value) {
  const std::string t = to_lower(text);
  const std::string v = to_lower(value);
  for (auto pos = t.find(v); pos != std::string::npos; pos = t.find(v, pos + 1)) {
    const bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(t[pos - 1]));
    const std::size_t end = pos + v.size();
    const bool right = end == t.size() || !std::isalnum(static_cast<unsigned char>(t[end]));
    if (left && right) return true;
  }
  return false;
}

std::vector<std::set<std::string>> values_by_attribute(const MfScenario& s) {
  std::vector<std::set<std::string>> out(s.attributes.size());
  for (const auto& list : s.lists) {
    for (const auto& f : list) {
      for (std::size_t a = 0; a < f.values.size(); ++a) out[a].insert(f.values[a]);
    }
  }
  return out;
}

// Per attribute: values named in the latest of `lines` naming any value.
std::vector<std::optional<std::set<std::string>>> latest_mentions(
    const std::vector<std::set<std::string>>& values, const std::vector<std::string>& lines) {
  std::vector<std::optional<std::set<std::string>>> out(values.size());
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (auto it = lines.rbegin(); it != lines.rend() && !out[a]; ++it) {
      std::set<std::string> hit;
      for (const auto& v : values[a]) {
        if (mentions(*it, v)) hit.insert(v);
      }
      if (!hit.empty()) out[a] = std::move(hit);
    }
  }
  return out;
}

std::string background(const MfScenario& s, std::size_t side) {
  std::string bg = "You are " + s.names[side] + ". You and " + s.names[1 - side] +
                   " each have a list of friends and share exactly one mutual friend. Talk with " +
                   s.names[1 - side] + " to find out who the mutual friend is.\nYour friends:";
  for (std::size_t i = 0; i < s.lists[side].size(); ++i) {
    bg += "\n" + std::to_string(i + 1) + ". " + s.describe(s.lists[side][i]);
  }
  return bg;
}

generation::ActionVocabulary vocabulary(const MfScenario& s, std::size_t side) {
  generation::ActionVocabulary v;
  for (const auto& f : s.lists[side]) v.friends.push_back(f.values);
  return v;
}

}  // namespace

const std::string kMfFinalSelectionPrompt =
    "The conversation is over. Select the mutual friend from your friend list: reply with "
    "\"SELECT:\" followed by the friend's number.";

const std::string kMfJudgeInstruction =
    "Read the dialogue below between two players looking for their mutual friend. Have both "
    "players agreed on who the mutual friend is? Answer Yes or No.";

void MfScenario::validate() const {
  if (attributes.empty()) throw DomainError("MF scenario needs at least one attribute");
  if (names[0].empty() || names[1].empty() || names[0] == names[1]) {
    throw DomainError("MF players need two distinct names");
  }
  for (const auto& list : lists) {
    if (list.empty()) throw DomainError("MF friend list is empty");
    for (const auto& f : list) {
      if (f.values.size() != attributes.size()) throw DomainError("friend does not match the schema");
    }
  }
  std::size_t common = 0;
  for (const auto& f : lists[0]) {
    common += static_cast<std::size_t>(std::count(lists[1].begin(), lists[1].end(), f));
  }
  if (common != 1) throw DomainError("MF lists must share exactly one friend");
}

std::array<std::size_t, 2> MfScenario::mutual_indices() const {
  for (std::size_t i = 0; i < lists[0].size(); ++i) {
    const auto it = std::find(lists[1].begin(), lists[1].end(), lists[0][i]);
    if (it != lists[1].end()) return {i, static_cast<std::size_t>(it - lists[1].begin())};
  }
  throw DomainError("MF lists share no friend");
}

std::string MfScenario::describe(const MfFriend& f) const {
  std::vector<std::string> parts;
  for (std::size_t a = 0; a < attributes.size(); ++a) parts.push_back(attributes[a] + ": " + f.values.at(a));
  return join(parts, ", ");
}

json to_json(const MfScenario& s) {
  json lists = json::array();
  for (const auto& list : s.lists) {
    json jl = json::array();
    for (const auto& f : list) jl.push_back(f.values);
    lists.push_back(jl);
  }
  return json{{"attributes", s.attributes}, {"names", s.names}, {"lists", lists}};
}

MfScenario mf_scenario_from_json(const json& j) {
  MfScenario s;
  try {
    s.attributes = j.at("attributes").get<std::vector<std::string>>();
    s.names = j.at("names").get<std::array<std::string, 2>>();
    for (std::size_t side = 0; side < 2; ++side) {
      for (const auto& jf : j.at("lists").at(side)) s.lists[side].push_back({jf.get<std::vector<std::string>>()});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed MF scenario: ") + e.what());
  }
  s.validate();
  return s;
}

MfScenario mf_generate_scenario(std::uint64_t seed, const WordLists& words, std::size_t friends_per_list,
                                std::size_t n_attributes) {
  if (friends_per_list == 0) throw DomainError("friends_per_list must be at least 1");
  if (n_attributes == 0 || n_attributes > words.mf_attributes.size()) {
    throw DomainError("n_attributes must be between 1 and " + std::to_string(words.mf_attributes.size()));
  }
  if (words.names.size() < 2) throw DataError("need at least two names");
  Rng rng(seed);
  MfScenario s;
  for (std::size_t a = 0; a < n_attributes; ++a) s.attributes.push_back(words.mf_attributes[a].first);
  const std::size_t n0 = uniform_index(rng, words.names.size());
  std::size_t n1 = uniform_index(rng, words.names.size() - 1);
  if (n1 >= n0) ++n1;
  s.names = {words.names[n0], words.names[n1]};

  auto draw = [&]() {
    MfFriend f;
    for (std::size_t a = 0; a < n_attributes; ++a) {
      const auto& vals = words.mf_attributes[a].second;
      f.values.push_back(vals[uniform_index(rng, vals.size())]);
    }
    return f;
  };
  std::vector<MfFriend> used;
  auto fresh = [&]() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      MfFriend f = draw();
      if (std::find(used.begin(), used.end(), f) == used.end()) {
        used.push_back(f);
        return f;
      }
    }
    throw DataError("word lists too small for distinct friends");
  };
  const MfFriend mutual = fresh();
  for (auto& list : s.lists) {
    for (std::size_t i = 0; i + 1 < friends_per_list; ++i) list.push_back(fresh());
    const std::size_t at = uniform_index(rng, friends_per_list);
    list.insert(list.begin() + static_cast<std::ptrdiff_t>(at), mutual);
  }
  s.validate();
  return s;
}

belief::WorldSet mf_world_events(const MfScenario& s, std::size_t owner) {
  if (owner > 1) throw DomainError("MF owner must be 0 or 1");
  const auto values = values_by_attribute(s);
  std::vector<belief::Event> events;
  for (std::size_t a = 0; a < s.attributes.size(); ++a) {
    for (const auto& v : values[a]) {
      events.push_back(belief::make_triple_event(events.size(), s.names[1 - owner], s.attributes[a], v));
    }
  }
  return belief::WorldSet(std::move(events));
}

EventIdSet mf_truth(const MfScenario& s, std::size_t owner, const belief::DialogueContext& context) {
  std::vector<std::string> lines;
  for (const auto& t : context.turns) {
    if (t.speaker == s.names[1 - owner]) lines.push_back(t.text);
  }
  const auto latest = latest_mentions(values_by_attribute(s), lines);
  const auto ws = mf_world_events(s, owner);
  EventIdSet truth;
  for (const auto& e : ws.events()) {
    const auto a = static_cast<std::size_t>(
        std::find(s.attributes.begin(), s.attributes.end(), e.payload.at("attribute")) - s.attributes.begin());
    if (latest[a] && latest[a]->count(e.payload.at("value"))) truth.insert(e.id);
  }
  return truth;
}

std::shared_ptr<const belief::BeliefEstimator> mf_oracle(const MfScenario& scenario) {
  return std::make_shared<belief::OracleEstimator>(
      [scenario](const belief::DialogueContext& ctx, const belief::WorldSet& ws, belief::Perspective) {
        for (std::size_t owner = 0; owner < 2; ++owner) {
          if (ws == mf_world_events(scenario, owner)) return mf_truth(scenario, owner, ctx);
        }
        throw DomainError("world set does not belong to this MF scenario");
      });
}

std::vector<std::optional<std::size_t>> mf_recency(const belief::WorldSet& ws,
                                                   const belief::DialogueContext& context) {
  std::vector<std::optional<std::size_t>> out(ws.size());
  for (const auto& e : ws.events()) {
    for (std::size_t t = 0; t < context.turns.size(); ++t) {
      if (mentions(context.turns[t].text, e.payload_or("value", e.text))) out[e.id] = t;
    }
  }
  return out;
}

bool mf_judge(const belief::DialogueContext& context) {
  std::vector<const belief::Turn*> spoken;
  for (const auto& t : context.turns) {
    if (t.speaker != belief::kSystemSpeaker) spoken.push_back(&t);
  }
  if (spoken.size() < 2) return false;
  const auto has = [](const belief::Turn* t) { return t->text.find(kConfirmToken) != std::string::npos; };
  return has(spoken[spoken.size() - 1]) && has(spoken[spoken.size() - 2]);
}

MfJudgeVerdict mf_judge(const generation::Generator& judge, const belief::DialogueContext& context) {
  MfJudgeVerdict v;
  v.prompt.system = kMfJudgeInstruction + "\n\nDialogue:\n" + context.render();
  v.prompt.key = generation::PromptKey{GameId::kMf, "judge", context.turns.size(), ""};
  v.reply = generation::generate(judge, v.prompt);
  std::string answer = to_lower(trim(v.reply.text));
  while (!answer.empty() && !std::isalpha(static_cast<unsigned char>(answer.back()))) answer.pop_back();
  if (answer.rfind("yes", 0) == 0) {
    v.identified = true;
  } else if (answer.rfind("no", 0) != 0) {
    v.malformed = true;
  }
  return v;
}

std::string mf_speaker(const MfScenario& s, std::size_t side) { return s.names.at(side); }

Episode mf_run_episode(const MfScenario& scenario, const AgentWiring& a, const AgentWiring& b,
                       const MfOptions& options) {
  scenario.validate();
  if (options.max_turns == 0) throw DomainError("max_turns must be at least 1");
  const std::array<const AgentWiring*, 2> agents{&a, &b};
  const std::array<belief::WorldSet, 2> ws{mf_world_events(scenario, 0), mf_world_events(scenario, 1)};
  const std::array<std::string, 2> bg{background(scenario, 0), background(scenario, 1)};
  const std::array<std::string, 2> roles{"player_a", "player_b"};

  detail::EpisodeLog log(GameId::kMf, "Find the mutual friend shared by " + scenario.names[0] + " and " +
                                          scenario.names[1] + ".");

  auto request_for = [&](std::size_t side) {
    generation::PromptRequest req;
    req.game = GameId::kMf;
    req.role = roles[side];
    req.self_name = scenario.names[side];
    req.background = bg[side];
    req.slots = {{"name_opponent", scenario.names[1 - side]}};
    return req;
  };

  while (log.outcome().turns < options.max_turns) {
    const std::size_t side = log.outcome().turns % 2;
    const auto& wiring = *agents[side];
    const auto ctx = log.context_for(bg[side]);
    const auto recency = mf_recency(ws[side], ctx);
    const selection::ConditionRequest creq{selection::GameTemplate::kMf, scenario.names[side],
                                           scenario.names[1 - side], ""};
    const auto cond = detail::single_act_conditioning(
        wiring, ctx, ws[side], epistemic::ActKind::kAlignment, creq,
        derive_seed(wiring.seed, log.outcome().turns), [&](const std::vector<std::size_t>& chosen) {
          return selection::dedupe_by_payload_key(chosen, ws[side], "attribute", recency);
        });
    auto req = request_for(side);
    req.condition = cond.condition;
    req.extra_block = cond.extra_block;
    const auto u = detail::run_generation(log, wiring, scenario.names[side], "turn", req, ctx, cond);
    if (!u.format_ok) {
      log.outcome().format_error = true;
      break;
    }
    log.add_turn(static_cast<int>(side), scenario.names[side], u);

    bool identified = false;
    if (options.judge) {
      const auto verdict = mf_judge(*options.judge, log.dialogue());
      StepLog step;
      step.speaker = "judge";
      step.turn = log.outcome().turns;
      step.kind = "judge";
      step.prompt = verdict.prompt;
      step.output = verdict.reply.text;
      step.raw = verdict.reply.raw;
      step.flags = verdict.reply.flags;
      if (verdict.malformed) step.flags.push_back("judge_reply_not_yes_no");
      log.add_step(std::move(step));
      identified = verdict.identified;
    } else {
      identified = mf_judge(log.dialogue());
    }
    if (identified) break;
  }

  std::array<std::optional<std::size_t>, 2> picks;
  if (!log.outcome().format_error) {
    log.add_system(kMfFinalSelectionPrompt);
    for (std::size_t side = 0; side < 2; ++side) {
      const auto ctx = log.context_for(bg[side]);
      const auto u = detail::run_generation(log, *agents[side], scenario.names[side], "final_selection",
                                            request_for(side), ctx, {});
      const auto action = generation::parse_action(GameId::kMf, u.text, vocabulary(scenario, side),
                                                   generation::ActionPosition::kTerminal);
      if (!u.format_ok || action.kind != generation::ParsedAction::Kind::kFriendPick) {
        log.outcome().format_error = true;
        log.outcome().error = u.format_ok ? action.reason : "empty final selection";
        break;
      }
      picks[side] = action.friend_index;
    }
  }
  if (picks[0] && picks[1]) {
    log.outcome().success = scenario.lists[0][*picks[0]] == scenario.lists[1][*picks[1]];
  }

  const auto& turns = log.dialogue().turns;
  for (std::size_t side = 0; side < 2; ++side) {
    TruthView view{roles[side], bg[side], ws[side], {}};
    belief::DialogueContext prefix;
    for (std::size_t k = 0; k <= turns.size(); ++k) {
      const auto truth = mf_truth(scenario, side, prefix);
      view.truth_after_turn.push_back(
          {{belief::Perspective::kSelfTruth, truth}, {belief::Perspective::kOpponentKnows, truth}});
      if (k < turns.size()) prefix.turns.push_back(turns[k]);
    }
    log.transcript().views.push_back(std::move(view));
  }
  return log.finish();
}

generation::GeneratorPtr mf_scripted_player(const MfScenario& scenario, std::size_t side,
                                            const std::string& policy) {
  if (policy != "cooperative") throw ConfigError("unknown MF player policy: " + policy);
  if (side > 1) throw DomainError("MF side must be 0 or 1");
  const auto values = values_by_attribute(scenario);
  auto fn = [scenario, side, values](const generation::Prompt& prompt) -> std::string {
    const auto& mine = scenario.lists[side];
    const auto latest = latest_mentions(values, detail::opponent_lines(prompt));
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < mine.size(); ++i) {
      bool ok = true;
      for (std::size_t a = 0; a < values.size(); ++a) {
        if (latest[a] && !latest[a]->count(mine[i].values[a])) ok = false;
      }
      if (ok) candidates.push_back(i);
    }
    if (detail::last_is_system(prompt)) {
      return std::string(generation::kSelectToken) + " " +
             std::to_string((candidates.empty() ? 0 : candidates.front()) + 1);
    }
    if (candidates.size() == 1) {
      return std::string(kConfirmToken) + " I think our mutual friend is " +
             scenario.describe(mine[candidates.front()]) + ".";
    }
    if (candidates.empty()) {
      for (std::size_t i = 0; i < mine.size(); ++i) candidates.push_back(i);
    }
    const std::size_t attr = prompt.key.turn_index % scenario.attributes.size();
    std::vector<std::string> said;
    for (std::size_t i : candidates) {
      const auto& v = mine[i].values[attr];
      if (std::find(said.begin(), said.end(), v) == said.end()) said.push_back(v);
    }
    return "My friends who could match have " + scenario.attributes[attr] + ": " + join(said, " / ") + ".";
  };
  return std::make_shared<generation::ScriptedGenerator>(std::map<generation::ScriptedGenerator::Key, std::string>{},
                                                         detail::wrapper_aware(fn));
}

}  // namespace beda::games
