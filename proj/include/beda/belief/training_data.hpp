#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/dialogue_context.hpp"
#include "beda/belief/estimator.hpp"
#include "beda/belief/world_set.hpp"

namespace beda::belief {

struct LabeledExample {
  DialogueContext context;
  Event event;
  Perspective perspective = Perspective::kOpponentKnows;
  bool label = false;

  bool operator==(const LabeledExample&) const = default;
};

// {context, event, perspective, label}; context is DialogueContext::render().
nlohmann::json to_json(const LabeledExample& example);
LabeledExample labeled_example_from_json(const nlohmann::json& j);

void write_labeled_examples(const std::string& path,
                            const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> read_labeled_examples(const std::string& path);

using TruthSnapshot = std::map<Perspective, EventIdSet>;

// One dialogue with its world set and the ground truth after each prefix:
// truth_after_turn[k] holds the truth once the first k turns were spoken,
// so it has turns.size() + 1 entries.
struct TruthTranscript {
  std::string episode_id;
  WorldSet world_set;
  DialogueContext context;
  std::vector<TruthSnapshot> truth_after_turn;
};

struct ClipPolicy {
  // Number of final turns to drop, drawn uniformly from this list.
  std::vector<std::size_t> drop_choices{0, 1, 2, 3};
};

// One clipped copy per transcript. Triple-style world sets emit each
// positive triple plus `negative_ratio` corrupted triples labelled false;
// other world sets emit one example per event and perspective.
std::vector<LabeledExample> emit_training_data(
    const std::vector<TruthTranscript>& transcripts, const ClipPolicy& clip,
    std::size_t negative_ratio, std::uint64_t seed);

enum class EvalMode { kBinary, kPairwise };

struct AccuracyBreakdown {
  std::size_t examples = 0;
  double accuracy = 0.0;
};

struct AccuracyReport {
  EvalMode mode = EvalMode::kBinary;
  std::size_t examples = 0;
  double accuracy = 0.0;
  std::map<Perspective, AccuracyBreakdown> per_perspective;
};

nlohmann::json to_json(const AccuracyReport& report);

// BINARY: share of examples whose thresholded estimate equals the label.
// PAIRWISE: groups the six assertive permutation events of each
// (context, perspective, subject) and scores the argmax permutation by
// its share of correct pairwise orders.
AccuracyReport evaluate_estimator(const BeliefEstimator& estimator,
                                  const std::vector<LabeledExample>& examples,
                                  EvalMode mode);

// Share of the item pairs ordered the same way in both rankings.
double pairwise_accuracy(const std::vector<std::string>& predicted,
                         const std::vector<std::string>& truth);

}  // namespace beda::belief
