#include "beda/games/ckbg.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "beda/errors.hpp"
#include "beda/generation/action.hpp"
#include "beda/util.hpp"

namespace beda::games {

using belief::Event;
using belief::EventIdSet;
using nlohmann::json;

namespace {

constexpr std::pair<ConditionClass, std::string_view> kClassNames[] = {
    {ConditionClass::kInformer, "informer"},
    {ConditionClass::kBurglarInspection, "burglar_inspection"},
    {ConditionClass::kKeeperInspection, "keeper_inspection"},
    {ConditionClass::kOutsiderInspection, "outsider_inspection"},
    {ConditionClass::kNoise, "noise"},
};

constexpr std::size_t kExistence = 0;
constexpr std::size_t kGoal = 3;
constexpr std::size_t kLiePropensity = 4;
constexpr std::size_t kBaseEvents = 5;

std::string with_article(const std::string& noun) { return indefinite_article(noun) + " " + noun; }

std::string hours_phrase(int hours) {
  return std::to_string(hours) + (hours == 1 ? " hour" : " hours");
}

std::string condition_text(const CkbgSetting& s, const CkbgCondition& c) {
  const std::string& container = s.containers.at(c.container);
  switch (c.cls) {
    case ConditionClass::kInformer:
      return "The keeper " + s.keeper + " probably lies to the burglar " + s.burglar + ".";
    case ConditionClass::kBurglarInspection:
      return "The burglar " + s.burglar + " opened the " + container + " " + hours_phrase(c.hours) +
             " ago and saw " + with_article(s.object_in(c.container)) + " in it.";
    case ConditionClass::kKeeperInspection:
      return "The keeper " + s.keeper + " opened the " + container + " " + hours_phrase(c.hours) + " ago.";
    case ConditionClass::kOutsiderInspection:
      return "The burglar's friend " + s.outsider + " opened the " + container + " " +
             hours_phrase(c.hours) + " ago.";
    case ConditionClass::kNoise:
      return "A noise is coming from the " + container + ".";
  }
  return {};
}

bool has_container(ConditionClass c) { return c != ConditionClass::kInformer; }
bool has_hours(ConditionClass c) {
  return c == ConditionClass::kBurglarInspection || c == ConditionClass::kKeeperInspection ||
         c == ConditionClass::kOutsiderInspection;
}

std::string keeper_background(const CkbgSetting& s) {
  const std::size_t v = s.valuable_container;
  std::string bg = "You are the keeper " + s.keeper + ". You are in a room with " +
                   with_article(s.containers[0]) + " and " + with_article(s.containers[1]) + ". The " +
                   s.containers[v] + " contains " + with_article(s.valuable) + " and the " +
                   s.containers[1 - v] + " contains " + with_article(s.decoy) + ". The burglar " +
                   s.burglar + " wants to steal the " + s.valuable +
                   ". Your goal is to mislead the burglar into choosing the wrong container.";
  std::vector<std::string> facts;
  for (std::size_t i : s.keeper_known) {
    if (s.conditions[i].cls != ConditionClass::kInformer) facts.push_back("- " + condition_text(s, s.conditions[i]));
  }
  if (!facts.empty()) bg += "\nYou also know:\n" + join(facts, "\n");
  return bg;
}

std::string burglar_background(const CkbgSetting& s, const belief::WorldSet& ws) {
  std::string bg = "You are the burglar " + s.burglar + ". You are in a room with " +
                   with_article(s.containers[0]) + " and " + with_article(s.containers[1]) +
                   ". You want to steal the " + s.valuable +
                   ", which is in one of the two containers. The keeper " + s.keeper +
                   " knows where it is. When you have decided, write \"[STOP]\" followed by the "
                   "container you choose.";
  std::vector<std::string> facts;
  for (std::size_t id : ckbg_burglar_truth(s)) {
    if (id != kExistence) facts.push_back("- " + ws[id].text);
  }
  bg += "\nYou know:\n" + join(facts, "\n");
  return bg;
}

std::string ckbg_task(const CkbgSetting& s) {
  return "Mislead the burglar " + s.burglar + " into choosing the container that does not hold the " +
         s.valuable;
}

std::string scene_context(const CkbgSetting& s) {
  return "There is " + with_article(s.containers[0]) + " and " + with_article(s.containers[1]) +
         " in the room. The " + s.valuable + " is in the " + s.containers[s.valuable_container] + ".";
}

// Container named last in `text`, if any.
std::optional<std::size_t> last_container(const CkbgSetting& s, const std::string& text) {
  const std::string lowered = to_lower(text);
  std::optional<std::size_t> best;
  std::size_t best_pos = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto pos = lowered.rfind(to_lower(s.containers[c]));
    if (pos != std::string::npos && (!best || pos > best_pos)) {
      best = c;
      best_pos = pos;
    }
  }
  return best;
}

// Event lines under "Your belief state:" in a conditioned keeper prompt.
std::vector<std::string> belief_state_lines(const std::string& system) {
  static const std::string kHead = "Your belief state: ";
  static const std::string kTail = "\nBased on the context";
  const auto start = system.find(kHead);
  if (start == std::string::npos) return {};
  const auto end = system.find(kTail, start);
  std::vector<std::string> out;
  for (const auto& line : split_lines(system.substr(start + kHead.size(), end - start - kHead.size()))) {
    std::string t = trim(line);
    if (t.rfind("- ", 0) == 0) out.push_back(t.substr(2));
  }
  return out;
}

}  // namespace

const std::string kCkbgForcedChoicePrompt =
    "The turn limit has been reached. Choose one container now: write \"[STOP]\" followed by the "
    "container you choose.";

std::string_view to_string(ConditionClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "unknown";
}

ConditionClass condition_class_from_string(std::string_view name) {
  for (const auto& [cls, n] : kClassNames) {
    if (n == name) return cls;
  }
  throw DataError("unknown condition class: " + std::string(name));
}

void CkbgSetting::validate() const {
  if (containers[0].empty() || containers[1].empty() || containers[0] == containers[1]) {
    throw DomainError("a setting needs two distinct containers");
  }
  if (valuable_container > 1) throw DomainError("valuable container index out of range");
  if (valuable.empty() || decoy.empty()) throw DomainError("valuable and decoy must be named");
  if (keeper.empty() || burglar.empty() || outsider.empty()) throw DomainError("agents must be named");
  std::set<ConditionClass> seen;
  for (const auto& c : conditions) {
    if (!seen.insert(c.cls).second) throw DomainError("condition class repeated in a setting");
    if (has_container(c.cls) && c.container > 1) throw DomainError("condition container out of range");
    if (has_hours(c.cls) && c.hours < 1) throw DomainError("inspection time must be positive");
  }
  for (const auto* side : {&keeper_known, &burglar_known}) {
    for (std::size_t i : *side) {
      if (i >= conditions.size()) throw DomainError("known condition index out of range");
    }
  }
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    if (!keeper_known.count(i) && !burglar_known.count(i)) {
      throw DomainError("condition " + std::to_string(i) + " is known to neither side");
    }
  }
}

json to_json(const CkbgSetting& s) {
  json conds = json::array();
  for (const auto& c : s.conditions) {
    json jc{{"class", to_string(c.cls)}};
    if (has_container(c.cls)) jc["container"] = c.container;
    if (has_hours(c.cls)) jc["hours"] = c.hours;
    conds.push_back(jc);
  }
  return json{{"keeper", s.keeper},
              {"burglar", s.burglar},
              {"outsider", s.outsider},
              {"containers", s.containers},
              {"valuable", {{"object", s.valuable}, {"container", s.valuable_container}}},
              {"decoy", s.decoy},
              {"conditions", conds},
              {"keeper_known", s.keeper_known},
              {"burglar_known", s.burglar_known}};
}

CkbgSetting ckbg_setting_from_json(const json& j) {
  CkbgSetting s;
  try {
    s.keeper = j.at("keeper").get<std::string>();
    s.burglar = j.at("burglar").get<std::string>();
    s.outsider = j.at("outsider").get<std::string>();
    s.containers = j.at("containers").get<std::array<std::string, 2>>();
    s.valuable = j.at("valuable").at("object").get<std::string>();
    s.valuable_container = j.at("valuable").at("container").get<std::size_t>();
    s.decoy = j.at("decoy").get<std::string>();
    for (const auto& jc : j.at("conditions")) {
      CkbgCondition c;
      c.cls = condition_class_from_string(jc.at("class").get<std::string>());
      c.container = jc.value("container", std::size_t{0});
      c.hours = jc.value("hours", 0);
      s.conditions.push_back(c);
    }
    s.keeper_known = j.at("keeper_known").get<std::set<std::size_t>>();
    s.burglar_known = j.at("burglar_known").get<std::set<std::size_t>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed CKBG setting: ") + e.what());
  }
  s.validate();
  return s;
}

ConditionCountDistribution ConditionCountDistribution::fixed(std::size_t k) {
  if (k > kConditionClassCount) throw DomainError("at most five distinct conditions per setting");
  ConditionCountDistribution d;
  d.weights.assign(k + 1, 0.0);
  d.weights[k] = 1.0;
  return d;
}

ConditionCountDistribution ConditionCountDistribution::train_default() {
  return ConditionCountDistribution{{0.0, 0.0, 0.46, 0.54}};
}

double ConditionCountDistribution::mean() const {
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    total += weights[k];
    weighted += weights[k] * static_cast<double>(k);
  }
  return weighted / total;
}

CkbgDatasetSummary summarize(const std::vector<CkbgSetting>& settings) {
  CkbgDatasetSummary s;
  s.settings = settings.size();
  for (const auto& st : settings) {
    s.conditions += st.conditions.size();
    s.known_conditions += st.keeper_known.size() + st.burglar_known.size();
  }
  s.avg_conditions = s.settings == 0 ? 0.0 : static_cast<double>(s.conditions) / s.settings;
  return s;
}

json to_json(const CkbgDatasetSummary& s) {
  return json{{"settings", s.settings},
              {"conditions", s.conditions},
              {"known_conditions", s.known_conditions},
              {"avg_conditions", s.avg_conditions}};
}

CkbgDataset ckbg_generate_dataset(std::size_t n_settings, const ConditionCountDistribution& counts,
                                  std::uint64_t seed, const WordLists& words,
                                  const CkbgGeneratorOptions& options) {
  if (n_settings == 0) throw DomainError("n_settings must be at least 1");
  if (counts.weights.empty() || counts.weights.size() > kConditionClassCount + 1) {
    throw DomainError("condition-count weights must cover 0..5 at most");
  }
  double total = 0.0;
  for (double w : counts.weights) {
    if (w < 0.0) throw DomainError("negative condition-count weight");
    total += w;
  }
  if (total <= 0.0) throw DomainError("condition-count weights sum to zero");
  if (words.containers.size() < 2 || words.names.size() < 3) {
    throw DataError("word lists need at least two containers and three names");
  }

  Rng rng(seed);
  auto pick = [&](const std::vector<std::string>& list) { return list[uniform_index(rng, list.size())]; };

  CkbgDataset out;
  for (std::size_t n = 0; n < n_settings; ++n) {
    CkbgSetting s;
    std::vector<std::size_t> name_idx(words.names.size());
    std::iota(name_idx.begin(), name_idx.end(), 0);
    for (std::size_t i = 0; i < 3; ++i) {
      std::swap(name_idx[i], name_idx[i + uniform_index(rng, name_idx.size() - i)]);
    }
    s.keeper = words.names[name_idx[0]];
    s.burglar = words.names[name_idx[1]];
    s.outsider = words.names[name_idx[2]];
    const std::size_t c0 = uniform_index(rng, words.containers.size());
    std::size_t c1 = uniform_index(rng, words.containers.size() - 1);
    if (c1 >= c0) ++c1;
    s.containers = {words.containers[c0], words.containers[c1]};
    s.valuable = pick(words.valuables);
    s.decoy = pick(words.decoys);
    s.valuable_container = uniform_index(rng, 2);

    const double u = uniform_unit(rng) * total;
    std::size_t k = 0;
    double acc = 0.0;
    for (; k + 1 < counts.weights.size(); ++k) {
      acc += counts.weights[k];
      if (u < acc) break;
    }
    while (counts.weights[k] == 0.0) --k;

    std::vector<std::size_t> classes(kConditionClassCount);
    std::iota(classes.begin(), classes.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(classes[i], classes[i + uniform_index(rng, classes.size() - i)]);
    }
    classes.resize(k);
    std::sort(classes.begin(), classes.end());
    for (std::size_t cls : classes) {
      CkbgCondition c;
      c.cls = static_cast<ConditionClass>(cls);
      if (has_container(c.cls)) c.container = uniform_index(rng, 2);
      if (has_hours(c.cls)) c.hours = 1 + static_cast<int>(uniform_index(rng, options.max_hours));
      const std::size_t idx = s.conditions.size();
      s.conditions.push_back(c);
      if (uniform_unit(rng) < options.both_sides_probability) {
        s.keeper_known.insert(idx);
        s.burglar_known.insert(idx);
      } else if (uniform_index(rng, 2) == 0) {
        s.keeper_known.insert(idx);
      } else {
        s.burglar_known.insert(idx);
      }
    }
    s.validate();
    out.settings.push_back(std::move(s));
  }
  out.summary = summarize(out.settings);
  return out;
}

belief::WorldSet ckbg_world_events(const CkbgSetting& s) {
  std::vector<Event> events;
  auto add = [&](std::string text, std::map<std::string, std::string> payload) {
    events.push_back(Event{events.size(), std::move(text), std::move(payload)});
  };
  add("There is " + with_article(s.containers[0]) + " and " + with_article(s.containers[1]) +
          " in the room.",
      {{"kind", "existence"}});
  for (std::size_t c = 0; c < 2; ++c) {
    add("The " + s.containers[c] + " contains " + with_article(s.object_in(c)) + ".",
        {{"kind", "content"}, {"container", std::to_string(c)}});
  }
  add("The keeper " + s.keeper + "'s goal is to mislead burglar " + s.burglar + ".", {{"kind", "goal"}});
  add("The keeper " + s.keeper + " probably lies to the burglar " + s.burglar + ".",
      {{"kind", "lie_propensity"}});
  for (std::size_t i = 0; i < s.conditions.size(); ++i) {
    const auto& c = s.conditions[i];
    if (c.cls == ConditionClass::kInformer) {
      events[kLiePropensity].payload["condition_index"] = std::to_string(i);
      events[kLiePropensity].payload["class"] = std::string(to_string(c.cls));
      continue;
    }
    add(condition_text(s, c), {{"kind", "condition"},
                               {"class", std::string(to_string(c.cls))},
                               {"condition_index", std::to_string(i)}});
  }
  return belief::WorldSet(std::move(events));
}

std::vector<std::size_t> ckbg_condition_events(const CkbgSetting& s) {
  std::vector<std::size_t> out;
  std::size_t next = kBaseEvents;
  for (const auto& c : s.conditions) {
    out.push_back(c.cls == ConditionClass::kInformer ? kLiePropensity : next++);
  }
  return out;
}

EventIdSet ckbg_keeper_truth(const CkbgSetting& s) {
  EventIdSet truth;
  for (std::size_t id = 0; id < kBaseEvents; ++id) truth.insert(id);
  const auto ids = ckbg_condition_events(s);
  for (std::size_t i : s.keeper_known) truth.insert(ids[i]);
  return truth;
}

EventIdSet ckbg_burglar_truth(const CkbgSetting& s) {
  EventIdSet truth{kExistence, kGoal};
  const auto ids = ckbg_condition_events(s);
  for (std::size_t i : s.burglar_known) {
    truth.insert(ids[i]);
    if (s.conditions[i].cls == ConditionClass::kBurglarInspection) {
      truth.insert(1 + s.conditions[i].container);
    }
  }
  return truth;
}

std::shared_ptr<const belief::BeliefEstimator> ckbg_oracle(const CkbgSetting& setting) {
  const std::size_t size = ckbg_world_events(setting).size();
  const EventIdSet keeper = ckbg_keeper_truth(setting);
  const EventIdSet burglar = ckbg_burglar_truth(setting);
  return std::make_shared<belief::OracleEstimator>(
      [=](const belief::DialogueContext&, const belief::WorldSet& ws, belief::Perspective p) {
        if (ws.size() != size) throw DomainError("world set does not belong to this CKBG setting");
        return p == belief::Perspective::kSelfTruth ? keeper : burglar;
      });
}

std::string ckbg_keeper_name(const CkbgSetting& s) { return "Keeper " + s.keeper; }
std::string ckbg_burglar_name(const CkbgSetting& s) { return "Burglar " + s.burglar; }

Episode ckbg_run_episode(const CkbgSetting& setting, const AgentWiring& keeper,
                         const AgentWiring& burglar, std::size_t max_turns) {
  setting.validate();
  if (max_turns == 0) throw DomainError("max_turns must be at least 1");
  constexpr int kKeeperSide = 0;
  constexpr int kBurglarSide = 1;

  const belief::WorldSet ws = ckbg_world_events(setting);
  const std::string keeper_label = ckbg_keeper_name(setting);
  const std::string burglar_label = ckbg_burglar_name(setting);
  const std::string keeper_bg = keeper_background(setting);
  const std::string burglar_bg = burglar_background(setting, ws);
  const generation::ActionVocabulary vocab{{setting.containers[0], setting.containers[1]}, {}};

  detail::EpisodeLog log(GameId::kCkbg, ckbg_task(setting));
  std::optional<std::string> choice;

  auto burglar_step = [&](const std::string& kind, generation::ActionPosition position) {
    generation::PromptRequest req;
    req.game = GameId::kCkbg;
    req.role = "burglar";
    req.self_name = burglar_label;
    req.background = burglar_bg;
    const auto ctx = log.context_for(burglar_bg);
    const auto u = detail::run_generation(log, burglar, burglar_label, kind, req, ctx, {});
    if (!u.format_ok) {
      log.outcome().format_error = true;
      return true;
    }
    log.add_turn(kBurglarSide, burglar_label, u);
    const auto action = generation::parse_action(GameId::kCkbg, u.text, vocab, position);
    if (action.kind == generation::ParsedAction::Kind::kStopChoice) {
      choice = action.container;
      return true;
    }
    if (action.kind == generation::ParsedAction::Kind::kFormatError) {
      log.outcome().format_error = true;
      log.outcome().error = action.reason;
      return true;
    }
    return false;
  };

  bool done = false;
  while (!done && log.outcome().turns < max_turns) {
    if (log.outcome().turns % 2 == 0) {
      done = burglar_step("turn", generation::ActionPosition::kDialogue);
      continue;
    }
    const auto ctx = log.context_for(keeper_bg);
    const selection::ConditionRequest creq{selection::GameTemplate::kCkbg, setting.keeper,
                                           setting.burglar, ""};
    const auto cond = detail::single_act_conditioning(keeper, ctx, ws, epistemic::ActKind::kAdversarial,
                                                      creq, derive_seed(keeper.seed, log.outcome().turns));
    generation::PromptRequest req;
    req.game = GameId::kCkbg;
    req.role = "keeper";
    req.self_name = keeper_label;
    req.background = keeper_bg;
    req.condition = cond.condition;
    req.extra_block = cond.extra_block;
    if (cond.opp_knows) {
      const std::string known = detail::known_event_bullets(*cond.opp_knows, ws);
      req.slots = {{"context", scene_context(setting)},
                   {"task", ckbg_task(setting)},
                   {"user_U", known.empty() ? "None." : known}};
    }
    const auto u = detail::run_generation(log, keeper, keeper_label, "turn", req, ctx, cond);
    if (!u.format_ok) {
      log.outcome().format_error = true;
      break;
    }
    log.add_turn(kKeeperSide, keeper_label, u);
  }

  if (!done && !log.outcome().format_error) {
    log.add_system(kCkbgForcedChoicePrompt);
    if (!burglar_step("forced_choice", generation::ActionPosition::kTerminal) && !choice) {
      log.outcome().format_error = true;
    }
    if (!choice && log.outcome().error.empty()) log.outcome().error = "no container chosen";
  }

  if (choice && !log.outcome().format_error) {
    const bool misled = *choice != setting.containers[setting.valuable_container];
    log.outcome().success = misled;
    log.add_system(misled ? "The burglar has been cheated."
                          : "The burglar found the " + setting.valuable + ".");
  }

  const std::size_t n_turns = log.dialogue().turns.size();
  const belief::TruthSnapshot keeper_view{{belief::Perspective::kSelfTruth, ckbg_keeper_truth(setting)},
                                          {belief::Perspective::kOpponentKnows, ckbg_burglar_truth(setting)}};
  log.transcript().views.push_back(
      TruthView{"keeper", keeper_bg, ws, std::vector<belief::TruthSnapshot>(n_turns + 1, keeper_view)});
  return log.finish();
}

generation::GeneratorPtr ckbg_scripted_keeper(const CkbgSetting& s, const std::string& policy) {
  if (policy != "mislead") throw ConfigError("unknown CKBG keeper policy: " + policy);
  const std::string decoy_container = s.containers[1 - s.valuable_container];
  auto fn = [s, decoy_container](const generation::Prompt& prompt) {
    std::string reply;
    for (const auto& line : belief_state_lines(prompt.system)) {
      // Mention one condition the burglar is missing; never contents or motives.
      if (line.find(" contains ") == std::string::npos && line.find(" lies ") == std::string::npos) {
        std::string lowered = line;
        if (lowered.rfind("The ", 0) == 0 || lowered.rfind("A ", 0) == 0) lowered[0] = static_cast<char>(std::tolower(lowered[0]));
        reply = "By the way, " + lowered + " ";
        break;
      }
    }
    return reply + "If I were you I would check the " + decoy_container + ".";
  };
  return std::make_shared<generation::ScriptedGenerator>(std::map<generation::ScriptedGenerator::Key, std::string>{},
                                                         detail::wrapper_aware(fn));
}

generation::GeneratorPtr ckbg_scripted_burglar(const CkbgSetting& s, const std::string& policy) {
  if (policy != "follow_advice" && policy != "always_true" && policy != "contrarian" && policy != "stall") {
    throw ConfigError("unknown CKBG burglar policy: " + policy);
  }
  bool warned = false;
  for (std::size_t i : s.burglar_known) {
    if (s.conditions[i].cls == ConditionClass::kInformer) warned = true;
  }
  auto fn = [s, policy, warned](const generation::Prompt& prompt) -> std::string {
    const bool forced = detail::last_is_system(prompt);
    if (!forced && prompt.key.turn_index == 0) {
      return "Hello " + s.keeper + ". Where should I look for the " + s.valuable + ", in the " +
             s.containers[0] + " or in the " + s.containers[1] + "?";
    }
    if (policy == "stall") {
      return forced ? "I really cannot decide." : "Let me think about it a little longer.";
    }
    std::size_t pick = s.valuable_container;
    if (policy != "always_true") {
      const auto lines = detail::opponent_lines(prompt);
      const std::size_t advised =
          lines.empty() ? 0 : last_container(s, lines.back()).value_or(0);
      pick = (policy == "contrarian" && warned) ? 1 - advised : advised;
    }
    return std::string(generation::kStopToken) + " I choose the " + s.containers[pick] + ".";
  };
  return std::make_shared<generation::ScriptedGenerator>(std::map<generation::ScriptedGenerator::Key, std::string>{},
                                                         detail::wrapper_aware(fn));
}

}  // namespace beda::games
