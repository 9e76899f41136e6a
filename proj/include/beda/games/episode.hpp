#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/dialogue_context.hpp"
#include "beda/belief/estimator.hpp"
#include "beda/belief/training_data.hpp"
#include "beda/game_id.hpp"
#include "beda/generation/generator.hpp"
#include "beda/selection/act_selection.hpp"
#include "beda/selection/condition.hpp"

namespace beda::games {

// How an agent turns beliefs into a prompt.
enum class Method { kBeda, kWoBelief, kWoBeliefCot, kWoBeliefReflect, kRandBelief, kMindDial };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);
bool uses_estimator(Method m);

// Everything one agent needs to take a turn.
struct AgentWiring {
  Method method = Method::kWoBelief;
  // Estimator for both perspectives; ignored by the w/o-belief methods.
  std::shared_ptr<const belief::BeliefEstimator> estimator;
  // Already wrapped for CoT / self-reflect.
  generation::GeneratorPtr generator;
  double epsilon = selection::kDefaultEpsilon;
  std::optional<selection::SelectionPolicy> policy_override;
  // Seeds the selection draws of this agent.
  std::uint64_t seed = 0;
};

// One call into a generator, with the beliefs and selection behind it.
struct StepLog {
  std::string speaker;
  std::size_t turn = 0;  // number of dialogue turns before this step
  std::string kind;      // "turn", "forced_choice", "final_selection", "judge"
  generation::Prompt prompt;
  std::string output;
  std::vector<std::string> raw;
  std::vector<std::string> flags;
  std::optional<belief::BeliefVector> self_truth;
  std::optional<belief::BeliefVector> opp_knows;
  std::vector<selection::SelectionResult> selections;
  bool fallback = false;
  std::string condition;
};

// Ground truth for one agent's world set, per dialogue prefix.
struct TruthView {
  std::string owner;
  std::string background;
  belief::WorldSet world_set;
  std::vector<belief::TruthSnapshot> truth_after_turn;
};

struct Transcript {
  belief::DialogueContext dialogue;  // shared turns, SYSTEM lines included
  std::vector<StepLog> steps;
  std::vector<TruthView> views;
};

struct EpisodeOutcome {
  GameId game = GameId::kCkbg;
  bool success = false;  // CKBG: keeper misled; MF: same pick; CaSiNo: agreement
  std::optional<std::array<double, 2>> rewards;  // CaSiNo agreements only
  std::size_t turns = 0;
  std::array<std::size_t, 2> tokens{0, 0};
  bool format_error = false;
  bool infra_failed = false;
  std::string error;
  std::size_t fallback_count = 0;
  std::size_t selection_steps = 0;

  std::size_t total_tokens() const { return tokens[0] + tokens[1]; }
};

struct Episode {
  EpisodeOutcome outcome;
  Transcript transcript;
};

nlohmann::json to_json(const StepLog& step);
nlohmann::json to_json(const Transcript& transcript);
nlohmann::json to_json(const EpisodeOutcome& outcome);
EpisodeOutcome outcome_from_json(const nlohmann::json& j);
nlohmann::json to_json(const belief::WorldSet& world_set);
belief::WorldSet world_set_from_json(const nlohmann::json& j);
nlohmann::json to_json(const selection::SelectionResult& r);

// The training-data view of a transcript: one TruthTranscript per agent
// view, over the shared dialogue.
std::vector<belief::TruthTranscript> truth_transcripts(const std::string& episode_id,
                                                       const nlohmann::json& transcript);

namespace detail {

// Bookkeeping shared by the three episode loops.
class EpisodeLog {
 public:
  EpisodeLog(GameId game, std::string task) {
    episode_.outcome.game = game;
    episode_.transcript.dialogue.task = std::move(task);
  }

  belief::DialogueContext context_for(const std::string& background) const {
    belief::DialogueContext ctx = episode_.transcript.dialogue;
    ctx.background = background;
    return ctx;
  }
  const belief::DialogueContext& dialogue() const { return episode_.transcript.dialogue; }

  void add_turn(int side, const std::string& speaker, const generation::Utterance& u);
  void add_system(const std::string& text);
  void add_step(StepLog step);
  EpisodeOutcome& outcome() { return episode_.outcome; }
  Transcript& transcript() { return episode_.transcript; }
  Episode finish() { return std::move(episode_); }

 private:
  Episode episode_;
};

// Result of running an agent's belief pipeline for one turn.
struct Conditioning {
  std::optional<selection::ConditionBlock> condition;
  std::string extra_block;
  std::optional<belief::BeliefVector> self_truth;
  std::optional<belief::BeliefVector> opp_knows;
  std::vector<selection::SelectionResult> selections;
  bool fallback = false;
  bool selected = false;  // a selection step happened
};

// Generates one utterance and records it as a step.
generation::Utterance run_generation(EpisodeLog& log, const AgentWiring& wiring,
                                     const std::string& speaker, const std::string& kind,
                                     const generation::PromptRequest& request,
                                     const belief::DialogueContext& context,
                                     const Conditioning& conditioning);

using ChosenFilter = std::function<std::vector<std::size_t>(const std::vector<std::size_t>&)>;

// Estimates both vectors and, for selecting methods, picks events for one
// act; MindDial gets the unfiltered list instead.
Conditioning single_act_conditioning(const AgentWiring& wiring, const belief::DialogueContext& ctx,
                                     const belief::WorldSet& ws, epistemic::ActKind act,
                                     const selection::ConditionRequest& request, std::uint64_t seed,
                                     const ChosenFilter& filter = {});

// Scripted policies answer wrapped prompts too: critiques are constant and
// CoT replies carry the reply delimiter.
generation::ScriptedGenerator::Policy wrapper_aware(generation::ScriptedGenerator::Policy policy);

std::vector<std::string> opponent_lines(const generation::Prompt& prompt);
bool last_is_system(const generation::Prompt& prompt);

// "- text" lines of the events an estimator vector marks as known.
std::string known_event_bullets(const belief::BeliefVector& v, const belief::WorldSet& ws);

}  // namespace detail

}  // namespace beda::games
