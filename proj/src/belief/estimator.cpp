#include "beda/belief/estimator.hpp"

#include <array>
#include <cctype>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::belief {

BeliefVector BeliefEstimator::estimate(const DialogueContext& context,
                                       const WorldSet& world_set,
                                       Perspective perspective) const {
  if (world_set.empty()) throw DomainError("cannot estimate over an empty world set");
  BeliefVector v = do_estimate(context, world_set, perspective);
  if (v.size() != world_set.size() || v.perspective() != perspective) {
    throw ProtocolError(name() + " estimator returned a vector that does not match the request");
  }
  return v;
}

BeliefVector oracle_estimate(const EventIdSet& ground_truth, const WorldSet& world_set,
                             Perspective perspective) {
  std::vector<double> values(world_set.size(), 0.0);
  for (auto id : ground_truth) {
    if (id >= values.size()) {
      throw DomainError("ground-truth id " + std::to_string(id) +
                        " is not in a world set of " + std::to_string(values.size()));
    }
    values[id] = 1.0;
  }
  return BeliefVector(perspective, std::move(values));
}

BeliefVector random_estimate(std::uint64_t seed, const WorldSet& world_set,
                             Perspective perspective) {
  Rng rng(seed);
  std::vector<double> values(world_set.size());
  for (auto& v : values) v = (rng() >> 63) ? 1.0 : 0.0;
  return BeliefVector(perspective, std::move(values));
}

namespace {

const std::unordered_set<std::string_view>& stop_words() {
  static const std::unordered_set<std::string_view> words = {
      "a",    "an",    "the",  "is",   "are",  "was",  "were", "be",   "been",
      "of",   "to",    "in",   "on",   "at",   "and",  "or",   "it",   "its",
      "that", "this",  "there", "for", "with", "from", "by",   "has",  "have",
      "had",  "i",     "you",  "he",   "she",  "we",   "they", "my",   "your",
      "his",  "her",   "our",  "their", "me",  "him",  "them", "do",   "does",
      "did",  "so",    "but",  "if",   "as",   "just", "s",    "t",    "d",
      "ll",   "re",    "ve",   "m",    "what", "which", "who", "how",  "where",
      "will", "would", "can",  "could", "about", "into", "than", "then", "am"};
  return words;
}

const std::unordered_map<std::string_view, std::string_view>& number_words() {
  static const std::unordered_map<std::string_view, std::string_view> words = {
      {"zero", "0"},      {"one", "1"},        {"two", "2"},       {"three", "3"},
      {"four", "4"},      {"five", "5"},       {"six", "6"},       {"seven", "7"},
      {"eight", "8"},     {"nine", "9"},       {"ten", "10"},      {"eleven", "11"},
      {"twelve", "12"},   {"thirteen", "13"},  {"fourteen", "14"}, {"fifteen", "15"},
      {"sixteen", "16"},  {"seventeen", "17"}, {"eighteen", "18"}, {"nineteen", "19"},
      {"twenty", "20"}};
  return words;
}

double overlap_score(const std::vector<std::string>& event_tokens,
                     const std::unordered_set<std::string>& context_tokens) {
  std::unordered_set<std::string> distinct(event_tokens.begin(), event_tokens.end());
  if (distinct.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& t : distinct) shared += context_tokens.count(t);
  return static_cast<double>(shared) / static_cast<double>(distinct.size());
}

}  // namespace

std::vector<std::string> content_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    auto num = number_words().find(current);
    if (num != number_words().end()) current = std::string(num->second);
    if (!stop_words().count(current)) out.push_back(current);
    current.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

BeliefVector keyword_estimate(const DialogueContext& context, const WorldSet& world_set,
                              Perspective perspective) {
  std::unordered_set<std::string> seen;
  for (const auto& turn : context.turns) {
    for (auto& t : content_tokens(turn.text)) seen.insert(std::move(t));
  }
  std::vector<double> values(world_set.size(), 0.0);
  for (const auto& e : world_set.events()) {
    // Triple events are matched on their value only.
    const std::string source = is_triple_event(e) ? e.payload.at("value") : e.text;
    if (overlap_score(content_tokens(source), seen) >= kKeywordThreshold) {
      values[e.id] = 1.0;
    }
  }
  return BeliefVector(perspective, std::move(values));
}

BeliefVector OracleEstimator::do_estimate(const DialogueContext& context,
                                          const WorldSet& world_set,
                                          Perspective perspective) const {
  return oracle_estimate(truth_(context, world_set, perspective), world_set, perspective);
}

BeliefVector RandomEstimator::do_estimate(const DialogueContext& context,
                                          const WorldSet& world_set,
                                          Perspective perspective) const {
  const std::uint64_t seed =
      derive_seed(seed_, fnv1a64(context.render()),
                  static_cast<std::uint64_t>(perspective) + 1);
  return random_estimate(seed, world_set, perspective);
}

BeliefVector KeywordEstimator::do_estimate(const DialogueContext& context,
                                           const WorldSet& world_set,
                                           Perspective perspective) const {
  return keyword_estimate(context, world_set, perspective);
}

}  // namespace beda::belief
