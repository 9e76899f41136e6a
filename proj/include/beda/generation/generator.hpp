#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/generation/prompt.hpp"

namespace beda::generation {

// Raw model output plus everything the episode log needs about it.
struct Completion {
  std::string text;
  std::vector<std::string> raw;    // every backend completion, in call order
  std::vector<std::string> flags;  // e.g. "reply_delimiter_missing"
};

// u: the emitted text, its whitespace token count and whether it is usable.
struct Utterance {
  std::string text;
  std::size_t token_count = 0;
  bool format_ok = true;
  std::vector<std::string> raw;
  std::vector<std::string> flags;
};

class Generator {
 public:
  virtual ~Generator() = default;

  Completion complete(const Prompt& prompt) const { return do_complete(prompt); }
  virtual std::string name() const = 0;

 private:
  virtual Completion do_complete(const Prompt& prompt) const = 0;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

// Runs the generator; an empty completion yields format_ok = false.
Utterance generate(const Generator& generator, const Prompt& prompt);

struct GeneratorConfig {
  enum class Backend { kScripted, kRemote };

  Backend backend = Backend::kScripted;
  std::string endpoint;  // chat-completions URL
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  std::size_t max_turn_tokens = 512;
  int retries = 2;
  std::chrono::milliseconds initial_backoff{500};

  // GEN_ENDPOINT, GEN_API_KEY, GEN_MODEL; backend becomes kRemote.
  static GeneratorConfig from_env();
  void validate() const;
};

// Pure lookup on (game, role, turn index, stage); an entry with an empty
// stage matches any stage. Misses go to `policy`, which must itself be a
// pure function of the prompt.
class ScriptedGenerator final : public Generator {
 public:
  using Key = std::tuple<GameId, std::string, std::size_t, std::string>;
  using Policy = std::function<std::string(const Prompt&)>;

  ScriptedGenerator() = default;
  explicit ScriptedGenerator(std::map<Key, std::string> table, Policy policy = {})
      : table_(std::move(table)), policy_(std::move(policy)) {}

  void add(GameId game, const std::string& role, std::size_t turn, std::string text,
           const std::string& stage = "");
  std::string name() const override { return "scripted"; }

 private:
  Completion do_complete(const Prompt& prompt) const override;
  std::map<Key, std::string> table_;
  Policy policy_;
};

// OpenAI-style chat completion: system message, then the interlocutor's
// turns as "user" and the agent's own turns as "assistant".
class RemoteChatGenerator final : public Generator {
 public:
  explicit RemoteChatGenerator(GeneratorConfig config);
  std::string name() const override { return "remote:" + config_.model; }

  static nlohmann::json build_request(const GeneratorConfig& config, const Prompt& prompt);
  static std::string parse_response(const std::string& body);

 private:
  Completion do_complete(const Prompt& prompt) const override;
  GeneratorConfig config_;
};

// Chain-of-thought wrapper: appends the fixed step-by-step instruction and
// keeps only the text after the reply delimiter.
class CotGenerator final : public Generator {
 public:
  explicit CotGenerator(GeneratorPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "cot(" + inner_->name() + ")"; }

 private:
  Completion do_complete(const Prompt& prompt) const override;
  GeneratorPtr inner_;
};

// Draft, critique, revision: three inner calls, the revision is emitted.
class SelfReflectGenerator final : public Generator {
 public:
  explicit SelfReflectGenerator(GeneratorPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "self_reflect(" + inner_->name() + ")"; }

 private:
  Completion do_complete(const Prompt& prompt) const override;
  GeneratorPtr inner_;
};

GeneratorPtr wrap_cot(GeneratorPtr inner);
GeneratorPtr wrap_self_reflect(GeneratorPtr inner);

// Every event with both probabilities, no filtering; one line per event.
std::string minddial_condition(const belief::BeliefVector& self_truth,
                               const belief::BeliefVector& opp_knows,
                               const belief::WorldSet& world_set);

}  // namespace beda::generation
