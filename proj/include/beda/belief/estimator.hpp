#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/dialogue_context.hpp"
#include "beda/belief/world_set.hpp"

namespace beda::belief {

// Maps (context, world set) to one probability per event. Implementations
// are read-only after construction and may be called concurrently.
class BeliefEstimator {
 public:
  virtual ~BeliefEstimator() = default;

  BeliefVector estimate(const DialogueContext& context, const WorldSet& world_set,
                        Perspective perspective) const;

  virtual std::string name() const = 0;

 private:
  virtual BeliefVector do_estimate(const DialogueContext& context,
                                   const WorldSet& world_set,
                                   Perspective perspective) const = 0;
};

// Indicator vector of `ground_truth`.
BeliefVector oracle_estimate(const EventIdSet& ground_truth, const WorldSet& world_set,
                             Perspective perspective);

// Independent fair coin per event, mapped to {0,1}.
BeliefVector random_estimate(std::uint64_t seed, const WorldSet& world_set,
                             Perspective perspective = Perspective::kSelfTruth);

// Token-overlap heuristic: an event is 1 when at least half of its content
// tokens occur somewhere in the turns. Both perspectives use the same rule.
BeliefVector keyword_estimate(const DialogueContext& context, const WorldSet& world_set,
                              Perspective perspective = Perspective::kOpponentKnows);

// Lowercased content tokens with number words folded to digits and
// stop words removed. Exposed for tests.
std::vector<std::string> content_tokens(const std::string& text);

inline constexpr double kKeywordThreshold = 0.5;

using TruthProvider = std::function<EventIdSet(
    const DialogueContext&, const WorldSet&, Perspective)>;

class OracleEstimator final : public BeliefEstimator {
 public:
  explicit OracleEstimator(TruthProvider truth) : truth_(std::move(truth)) {}
  std::string name() const override { return "oracle"; }

 private:
  BeliefVector do_estimate(const DialogueContext& context, const WorldSet& world_set,
                           Perspective perspective) const override;
  TruthProvider truth_;
};

// Draws a fresh vector per call; the draw is seeded from (seed, rendered
// context, perspective) so identical calls repeat.
class RandomEstimator final : public BeliefEstimator {
 public:
  explicit RandomEstimator(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }

 private:
  BeliefVector do_estimate(const DialogueContext& context, const WorldSet& world_set,
                           Perspective perspective) const override;
  std::uint64_t seed_;
};

class KeywordEstimator final : public BeliefEstimator {
 public:
  std::string name() const override { return "keyword"; }

 private:
  BeliefVector do_estimate(const DialogueContext& context, const WorldSet& world_set,
                           Perspective perspective) const override;
};

}  // namespace beda::belief
