#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "beda/belief/estimator.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/games/episode.hpp"
#include "beda/games/wordlists.hpp"

namespace beda::games {

enum class ConditionClass { kInformer, kBurglarInspection, kKeeperInspection, kOutsiderInspection, kNoise };

inline constexpr std::size_t kConditionClassCount = 5;

std::string_view to_string(ConditionClass c);
ConditionClass condition_class_from_string(std::string_view name);

struct CkbgCondition {
  ConditionClass cls = ConditionClass::kInformer;
  std::size_t container = 0;  // inspections and noise
  int hours = 0;              // inspections

  bool operator==(const CkbgCondition&) const = default;
};

struct CkbgSetting {
  std::string keeper;
  std::string burglar;
  std::string outsider;  // the burglar's friend
  std::array<std::string, 2> containers;
  std::string valuable;
  std::size_t valuable_container = 0;
  std::string decoy;
  std::vector<CkbgCondition> conditions;
  std::set<std::size_t> keeper_known;
  std::set<std::size_t> burglar_known;

  const std::string& object_in(std::size_t container) const {
    return container == valuable_container ? valuable : decoy;
  }
  void validate() const;
  bool operator==(const CkbgSetting&) const = default;
};

nlohmann::json to_json(const CkbgSetting& s);
CkbgSetting ckbg_setting_from_json(const nlohmann::json& j);

// weights[k] is the relative frequency of settings with k distinct conditions.
struct ConditionCountDistribution {
  std::vector<double> weights;

  static ConditionCountDistribution fixed(std::size_t k);
  // P(2) = 0.46, P(3) = 0.54: mean 2.54.
  static ConditionCountDistribution train_default();
  double mean() const;
};

struct CkbgGeneratorOptions {
  double both_sides_probability = 0.687;
  int max_hours = 12;
};

struct CkbgDatasetSummary {
  std::size_t settings = 0;
  std::size_t conditions = 0;
  std::size_t known_conditions = 0;
  double avg_conditions = 0.0;

  bool operator==(const CkbgDatasetSummary&) const = default;
};

CkbgDatasetSummary summarize(const std::vector<CkbgSetting>& settings);
nlohmann::json to_json(const CkbgDatasetSummary& s);

struct CkbgDataset {
  std::vector<CkbgSetting> settings;
  CkbgDatasetSummary summary;
};

CkbgDataset ckbg_generate_dataset(std::size_t n_settings, const ConditionCountDistribution& counts,
                                  std::uint64_t seed, const WordLists& words,
                                  const CkbgGeneratorOptions& options = {});

// Five base events (existence, both contents, keeper goal, lie-propensity)
// followed by one event per non-informer condition in setting order. The
// informer condition is realized by the lie-propensity event.
belief::WorldSet ckbg_world_events(const CkbgSetting& setting);

belief::EventIdSet ckbg_keeper_truth(const CkbgSetting& setting);
belief::EventIdSet ckbg_burglar_truth(const CkbgSetting& setting);

// Event id carrying each condition, in condition order.
std::vector<std::size_t> ckbg_condition_events(const CkbgSetting& setting);

// Oracle estimator for the keeper: self = keeper truth, opponent = burglar truth.
std::shared_ptr<const belief::BeliefEstimator> ckbg_oracle(const CkbgSetting& setting);

std::string ckbg_keeper_name(const CkbgSetting& s);   // speaker label
std::string ckbg_burglar_name(const CkbgSetting& s);  // speaker label

inline constexpr std::size_t kCkbgDefaultMaxTurns = 10;

extern const std::string kCkbgForcedChoicePrompt;

// Burglar opens; turns alternate. The keeper conditions on its adversarial
// selection. A burglar [STOP] choice ends the episode; at max_turns the
// burglar gets a forced-choice prompt.
Episode ckbg_run_episode(const CkbgSetting& setting, const AgentWiring& keeper,
                         const AgentWiring& burglar, std::size_t max_turns = kCkbgDefaultMaxTurns);

// Scripted agents. Keeper: "mislead". Burglar: "follow_advice",
// "always_true", "contrarian", "stall".
generation::GeneratorPtr ckbg_scripted_keeper(const CkbgSetting& setting,
                                              const std::string& policy = "mislead");
generation::GeneratorPtr ckbg_scripted_burglar(const CkbgSetting& setting,
                                               const std::string& policy = "follow_advice");

}  // namespace beda::games
