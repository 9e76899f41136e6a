#include "beda/games/episode.hpp"

#include "beda/errors.hpp"
#include "beda/generation/baseline_templates.hpp"
#include "beda/util.hpp"

namespace beda::games {

using nlohmann::json;

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::kBeda, "beda"},
    {Method::kWoBelief, "wo_belief"},
    {Method::kWoBeliefCot, "wo_belief_cot"},
    {Method::kWoBeliefReflect, "wo_belief_reflect"},
    {Method::kRandBelief, "rand_belief"},
    {Method::kMindDial, "minddial"},
};

json ids_to_json(const belief::EventIdSet& ids) { return json(std::vector<std::size_t>(ids.begin(), ids.end())); }

belief::EventIdSet ids_from_json(const json& j) {
  belief::EventIdSet out;
  for (const auto& v : j) out.insert(v.get<std::size_t>());
  return out;
}

json vector_to_json(const belief::BeliefVector& v) {
  return json{{"perspective", to_string(v.perspective())}, {"values", v.values()}};
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [method, name] : kMethodNames) {
    if (method == m) return name;
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  const std::string lowered = to_lower(name);
  for (const auto& [method, n] : kMethodNames) {
    if (n == lowered) return method;
  }
  throw ConfigError("unknown method: " + std::string(name));
}

bool uses_estimator(Method m) {
  return m == Method::kBeda || m == Method::kRandBelief || m == Method::kMindDial;
}

json to_json(const selection::SelectionResult& r) {
  return json{{"feasible", ids_to_json(r.feasible)}, {"chosen", r.chosen}, {"fallback", r.fallback}};
}

json to_json(const StepLog& step) {
  json j{{"speaker", step.speaker},
         {"turn", step.turn},
         {"kind", step.kind},
         {"prompt", generation::to_json(step.prompt)},
         {"output", step.output},
         {"raw", step.raw},
         {"flags", step.flags},
         {"fallback", step.fallback},
         {"condition", step.condition}};
  j["self_truth"] = step.self_truth ? vector_to_json(*step.self_truth) : json(nullptr);
  j["opp_knows"] = step.opp_knows ? vector_to_json(*step.opp_knows) : json(nullptr);
  j["selections"] = json::array();
  for (const auto& s : step.selections) j["selections"].push_back(to_json(s));
  return j;
}

json to_json(const belief::WorldSet& world_set) {
  json events = json::array();
  for (const auto& e : world_set.events()) {
    events.push_back(json{{"id", e.id}, {"text", e.text}, {"payload", e.payload}});
  }
  return events;
}

belief::WorldSet world_set_from_json(const json& j) {
  std::vector<belief::Event> events;
  for (const auto& e : j) {
    belief::Event ev;
    ev.id = e.at("id").get<std::size_t>();
    ev.text = e.at("text").get<std::string>();
    ev.payload = e.at("payload").get<std::map<std::string, std::string>>();
    events.push_back(std::move(ev));
  }
  return belief::WorldSet(std::move(events));
}

json to_json(const Transcript& transcript) {
  json turns = json::array();
  for (const auto& t : transcript.dialogue.turns) {
    turns.push_back(json{{"speaker", t.speaker}, {"text", t.text}});
  }
  json steps = json::array();
  for (const auto& s : transcript.steps) steps.push_back(to_json(s));
  json views = json::array();
  for (const auto& v : transcript.views) {
    json truth = json::array();
    for (const auto& snap : v.truth_after_turn) {
      json entry = json::object();
      for (const auto& [p, ids] : snap) entry[std::string(to_string(p))] = ids_to_json(ids);
      truth.push_back(entry);
    }
    views.push_back(json{{"owner", v.owner},
                         {"background", v.background},
                         {"world_set", to_json(v.world_set)},
                         {"truth_after_turn", truth}});
  }
  return json{{"task", transcript.dialogue.task}, {"turns", turns}, {"steps", steps}, {"views", views}};
}

json to_json(const EpisodeOutcome& o) {
  json j{{"game", to_string(o.game)},
         {"success", o.success},
         {"turns", o.turns},
         {"tokens", o.tokens},
         {"format_error", o.format_error},
         {"infra_failed", o.infra_failed},
         {"error", o.error},
         {"fallback_count", o.fallback_count},
         {"selection_steps", o.selection_steps}};
  j["rewards"] = o.rewards ? json(*o.rewards) : json(nullptr);
  return j;
}

EpisodeOutcome outcome_from_json(const json& j) {
  EpisodeOutcome o;
  o.game = game_from_string(j.at("game").get<std::string>());
  o.success = j.at("success").get<bool>();
  o.turns = j.at("turns").get<std::size_t>();
  o.tokens = j.at("tokens").get<std::array<std::size_t, 2>>();
  o.format_error = j.at("format_error").get<bool>();
  o.infra_failed = j.at("infra_failed").get<bool>();
  o.error = j.at("error").get<std::string>();
  o.fallback_count = j.at("fallback_count").get<std::size_t>();
  o.selection_steps = j.at("selection_steps").get<std::size_t>();
  if (!j.at("rewards").is_null()) o.rewards = j.at("rewards").get<std::array<double, 2>>();
  return o;
}

std::vector<belief::TruthTranscript> truth_transcripts(const std::string& episode_id,
                                                       const json& transcript) {
  std::vector<belief::Turn> turns;
  for (const auto& t : transcript.at("turns")) {
    turns.push_back({t.at("speaker").get<std::string>(), t.at("text").get<std::string>()});
  }
  std::vector<belief::TruthTranscript> out;
  for (const auto& v : transcript.at("views")) {
    belief::TruthTranscript tt;
    tt.episode_id = episode_id + "/" + v.at("owner").get<std::string>();
    tt.world_set = world_set_from_json(v.at("world_set"));
    tt.context.task = transcript.at("task").get<std::string>();
    tt.context.background = v.at("background").get<std::string>();
    tt.context.turns = turns;
    for (const auto& snap : v.at("truth_after_turn")) {
      belief::TruthSnapshot s;
      for (const auto& [key, ids] : snap.items()) s[belief::perspective_from_string(key)] = ids_from_json(ids);
      tt.truth_after_turn.push_back(std::move(s));
    }
    out.push_back(std::move(tt));
  }
  return out;
}

namespace detail {

void EpisodeLog::add_turn(int side, const std::string& speaker, const generation::Utterance& u) {
  episode_.transcript.dialogue.turns.push_back({speaker, u.text});
  episode_.outcome.turns += 1;
  episode_.outcome.tokens.at(static_cast<std::size_t>(side)) += u.token_count;
}

void EpisodeLog::add_system(const std::string& text) {
  episode_.transcript.dialogue.turns.push_back({belief::kSystemSpeaker, text});
}

void EpisodeLog::add_step(StepLog step) { episode_.transcript.steps.push_back(std::move(step)); }

generation::Utterance run_generation(EpisodeLog& log, const AgentWiring& wiring,
                                     const std::string& speaker, const std::string& kind,
                                     const generation::PromptRequest& request,
                                     const belief::DialogueContext& context,
                                     const Conditioning& conditioning) {
  if (!wiring.generator) throw ConfigError("agent " + speaker + " has no generator");
  StepLog step;
  step.speaker = speaker;
  step.turn = log.outcome().turns;
  step.kind = kind;
  step.prompt = generation::render_prompt(request, context);
  const generation::Utterance u = generation::generate(*wiring.generator, step.prompt);
  step.output = u.text;
  step.raw = u.raw;
  step.flags = u.flags;
  step.self_truth = conditioning.self_truth;
  step.opp_knows = conditioning.opp_knows;
  step.selections = conditioning.selections;
  step.fallback = conditioning.fallback;
  if (conditioning.condition) step.condition = conditioning.condition->text;
  if (!conditioning.extra_block.empty()) step.condition = conditioning.extra_block;
  if (conditioning.selected) {
    log.outcome().selection_steps += 1;
    if (conditioning.fallback) log.outcome().fallback_count += 1;
  }
  log.add_step(std::move(step));
  return u;
}

Conditioning single_act_conditioning(const AgentWiring& wiring, const belief::DialogueContext& ctx,
                                     const belief::WorldSet& ws, epistemic::ActKind act,
                                     const selection::ConditionRequest& request, std::uint64_t seed,
                                     const ChosenFilter& filter) {
  Conditioning c;
  if (!uses_estimator(wiring.method)) return c;
  if (!wiring.estimator) throw ConfigError("method " + std::string(to_string(wiring.method)) +
                                           " needs an estimator");
  const auto self = wiring.estimator->estimate(ctx, ws, belief::Perspective::kSelfTruth);
  const auto opp = wiring.estimator->estimate(ctx, ws, belief::Perspective::kOpponentKnows);
  c.self_truth = self;
  c.opp_knows = opp;
  if (wiring.method == Method::kMindDial) {
    c.extra_block = std::string(generation::baseline_templates::kBeliefListHeader) + "\n" +
                    generation::minddial_condition(self, opp, ws);
    return c;
  }
  const auto feasible =
      selection::feasible_set(self, opp, selection::ActConstraint(act, wiring.epsilon));
  auto result = selection::choose(
      feasible, wiring.policy_override.value_or(selection::SelectionPolicy::all()), seed);
  if (filter && !result.fallback) result.chosen = filter(result.chosen);
  c.selected = true;
  c.fallback = result.fallback;
  c.condition = selection::compose_condition(result.chosen, ws, request);
  c.selections.push_back(std::move(result));
  return c;
}

std::string known_event_bullets(const belief::BeliefVector& v, const belief::WorldSet& ws) {
  std::vector<std::string> lines;
  for (std::size_t id : v.known()) lines.push_back("- " + ws[id].text);
  return join(lines, "\n");
}

generation::ScriptedGenerator::Policy wrapper_aware(generation::ScriptedGenerator::Policy policy) {
  return [policy = std::move(policy)](const generation::Prompt& prompt) -> std::string {
    if (prompt.key.stage == "critique") return "The draft is fine as it is.";
    std::string reply = policy(prompt);
    if (prompt.system.find(generation::baseline_templates::kCotInstruction) != std::string::npos) {
      reply = "I will keep my plan.\n" + std::string(generation::baseline_templates::kReplyDelimiter) +
              " " + reply;
    }
    return reply;
  };
}

std::vector<std::string> opponent_lines(const generation::Prompt& prompt) {
  std::vector<std::string> out;
  for (const auto& t : prompt.turns) {
    if (t.role == generation::PromptRole::kInterlocutor) out.push_back(t.text);
  }
  return out;
}

bool last_is_system(const generation::Prompt& prompt) {
  return !prompt.turns.empty() && prompt.turns.back().role == generation::PromptRole::kSystem;
}

}  // namespace detail

}  // namespace beda::games
