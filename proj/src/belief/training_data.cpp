#include "beda/belief/training_data.hpp"

#include <fstream>
#include <unordered_map>

#include "beda/errors.hpp"
#include "beda/util.hpp"

namespace beda::belief {

nlohmann::json to_json(const LabeledExample& example) {
  return {{"context", example.context.render()},
          {"event", example.event.text},
          {"perspective", std::string(to_string(example.perspective))},
          {"label", example.label}};
}

LabeledExample labeled_example_from_json(const nlohmann::json& j) {
  LabeledExample ex;
  ex.context = DialogueContext::parse(j.at("context").get<std::string>());
  ex.event = Event{0, j.at("event").get<std::string>(), {}};
  ex.perspective = perspective_from_string(j.at("perspective").get<std::string>());
  ex.label = j.at("label").get<bool>();
  return ex;
}

void write_labeled_examples(const std::string& path,
                            const std::vector<LabeledExample>& examples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
}

std::vector<LabeledExample> read_labeled_examples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<LabeledExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(labeled_example_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw LoadError(std::string("malformed labeled example: ") + e.what(), lineno);
    }
  }
  return out;
}

namespace {

struct TripleKey {
  std::string attribute;
  std::string value;
  bool operator<(const TripleKey& o) const {
    return std::tie(attribute, value) < std::tie(o.attribute, o.value);
  }
};

// Alters the attribute or the value of `positive` so that the result is
// not itself a positive. Returns false when no such triple exists.
bool corrupt_triple(const Event& positive, const WorldSet& world_set,
                    const std::set<TripleKey>& positives, std::set<TripleKey>& used,
                    Rng& rng, Event& out) {
  std::vector<std::string> attributes;
  std::map<std::string, std::vector<std::string>> values_by_attr;
  for (const auto& e : world_set.events()) {
    if (!is_triple_event(e)) continue;
    const auto& a = e.payload.at("attribute");
    if (!values_by_attr.count(a)) attributes.push_back(a);
    auto& vals = values_by_attr[a];
    if (std::find(vals.begin(), vals.end(), e.payload.at("value")) == vals.end()) {
      vals.push_back(e.payload.at("value"));
    }
  }
  const auto& attr = positive.payload.at("attribute");
  const auto& value = positive.payload.at("value");

  auto admissible = [&](const TripleKey& k) {
    return !positives.count(k) && !used.count(k);
  };
  std::vector<TripleKey> alter_value;
  for (const auto& v : values_by_attr[attr]) {
    TripleKey k{attr, v};
    if (v != value && admissible(k)) alter_value.push_back(k);
  }
  std::vector<TripleKey> alter_attribute;
  for (const auto& a : attributes) {
    TripleKey k{a, value};
    if (a != attr && admissible(k)) alter_attribute.push_back(k);
  }

  const bool pick_value = uniform_index(rng, 2) == 0;
  const auto* pool = pick_value ? &alter_value : &alter_attribute;
  if (pool->empty()) pool = pick_value ? &alter_attribute : &alter_value;
  if (pool->empty()) return false;

  const TripleKey chosen = (*pool)[uniform_index(rng, pool->size())];
  used.insert(chosen);
  out = make_triple_event(world_set.size(), positive.payload.at("interlocutor"),
                          chosen.attribute, chosen.value);
  for (const auto& e : world_set.events()) {
    if (e.text == out.text) out.id = e.id;
  }
  return true;
}

}  // namespace

std::vector<LabeledExample> emit_training_data(
    const std::vector<TruthTranscript>& transcripts, const ClipPolicy& clip,
    std::size_t negative_ratio, std::uint64_t seed) {
  if (clip.drop_choices.empty()) throw DomainError("clip policy has no choices");
  Rng rng(seed);
  std::vector<LabeledExample> out;

  for (const auto& tr : transcripts) {
    const std::size_t n_turns = tr.context.turns.size();
    if (tr.truth_after_turn.size() != n_turns + 1) {
      throw DataError("episode '" + tr.episode_id + "' carries " +
                      std::to_string(tr.truth_after_turn.size()) +
                      " truth snapshots for " + std::to_string(n_turns) + " turns");
    }
    const std::size_t drop =
        std::min(clip.drop_choices[uniform_index(rng, clip.drop_choices.size())], n_turns);
    const DialogueContext clipped = tr.context.clipped(drop);
    const TruthSnapshot& truth = tr.truth_after_turn[n_turns - drop];
    if (truth.empty()) {
      throw DataError("episode '" + tr.episode_id + "' has no ground truth after turn " +
                      std::to_string(n_turns - drop));
    }

    bool triple_style = !tr.world_set.empty();
    for (const auto& e : tr.world_set.events()) triple_style = triple_style && is_triple_event(e);

    for (const auto& [perspective, ids] : truth) {
      if (!triple_style) {
        for (const auto& e : tr.world_set.events()) {
          out.push_back(LabeledExample{clipped, e, perspective, ids.count(e.id) > 0});
        }
        continue;
      }
      std::set<TripleKey> positives;
      for (auto id : ids) {
        const auto& e = tr.world_set[id];
        positives.insert({e.payload.at("attribute"), e.payload.at("value")});
      }
      for (auto id : ids) {
        const Event& positive = tr.world_set[id];
        out.push_back(LabeledExample{clipped, positive, perspective, true});
        std::set<TripleKey> used;
        for (std::size_t k = 0; k < negative_ratio; ++k) {
          Event negative;
          if (!corrupt_triple(positive, tr.world_set, positives, used, rng, negative)) break;
          out.push_back(LabeledExample{clipped, std::move(negative), perspective, false});
        }
      }
    }
  }
  return out;
}

nlohmann::json to_json(const AccuracyReport& report) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [p, b] : report.per_perspective) {
    per[std::string(to_string(p))] = {{"examples", b.examples}, {"accuracy", b.accuracy}};
  }
  return {{"mode", report.mode == EvalMode::kBinary ? "binary" : "pairwise"},
          {"examples", report.examples},
          {"accuracy", report.accuracy},
          {"per_perspective", std::move(per)}};
}

double pairwise_accuracy(const std::vector<std::string>& predicted,
                         const std::vector<std::string>& truth) {
  if (predicted.size() != truth.size() || truth.size() < 2) {
    throw DomainError("rankings must have the same length of at least two");
  }
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < predicted.size(); ++i) position[predicted[i]] = i;
  std::size_t pairs = 0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      auto pi = position.find(truth[i]);
      auto pj = position.find(truth[j]);
      if (pi == position.end() || pj == position.end()) {
        throw DomainError("rankings are over different items");
      }
      ++pairs;
      if (pi->second < pj->second) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(pairs);
}

namespace {

std::vector<std::string> split_ranking(const std::string& ranking) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (true) {
    auto gt = ranking.find('>', start);
    items.push_back(ranking.substr(start, gt - start));
    if (gt == std::string::npos) break;
    start = gt + 1;
  }
  return items;
}

void finish(AccuracyReport& report, double total,
            const std::map<Perspective, double>& per_total) {
  report.accuracy = report.examples ? total / static_cast<double>(report.examples) : 0.0;
  for (auto& [p, b] : report.per_perspective) {
    b.accuracy = b.examples ? per_total.at(p) / static_cast<double>(b.examples) : 0.0;
  }
}

AccuracyReport evaluate_binary(const BeliefEstimator& estimator,
                               const std::vector<LabeledExample>& examples) {
  AccuracyReport report;
  report.mode = EvalMode::kBinary;
  double total = 0.0;
  std::map<Perspective, double> per_total;
  for (const auto& ex : examples) {
    Event single = ex.event;
    single.id = 0;
    const WorldSet ws({single});
    const bool predicted =
        estimator.estimate(ex.context, ws, ex.perspective)[0] >= kKnownThreshold;
    const double hit = predicted == ex.label ? 1.0 : 0.0;
    ++report.examples;
    total += hit;
    ++report.per_perspective[ex.perspective].examples;
    per_total[ex.perspective] += hit;
  }
  finish(report, total, per_total);
  return report;
}

AccuracyReport evaluate_pairwise(const BeliefEstimator& estimator,
                                 const std::vector<LabeledExample>& examples) {
  struct Group {
    DialogueContext context;
    Perspective perspective;
    std::vector<const LabeledExample*> members;
  };
  std::vector<Group> groups;
  std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
  for (const auto& ex : examples) {
    if (!ex.event.payload.count("ranking") || ex.event.payload_or("polarity", "is") != "is") {
      continue;
    }
    auto key = std::make_tuple(ex.context.render(), static_cast<int>(ex.perspective),
                               ex.event.payload_or("subject"));
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back(Group{ex.context, ex.perspective, {}});
    groups[it->second].members.push_back(&ex);
  }

  AccuracyReport report;
  report.mode = EvalMode::kPairwise;
  double total = 0.0;
  std::map<Perspective, double> per_total;
  for (const auto& g : groups) {
    std::vector<Event> events;
    const LabeledExample* truth = nullptr;
    for (const auto* m : g.members) {
      Event e = m->event;
      e.id = events.size();
      events.push_back(std::move(e));
      if (m->label) {
        if (truth) throw DataError("permutation group has more than one true ranking");
        truth = m;
      }
    }
    if (!truth) throw DataError("permutation group has no true ranking");
    const BeliefVector v = estimator.estimate(g.context, WorldSet(events), g.perspective);
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) best = i;
    }
    const double score =
        pairwise_accuracy(split_ranking(events[best].payload.at("ranking")),
                          split_ranking(truth->event.payload.at("ranking")));
    ++report.examples;
    total += score;
    ++report.per_perspective[g.perspective].examples;
    per_total[g.perspective] += score;
  }
  finish(report, total, per_total);
  return report;
}

}  // namespace

AccuracyReport evaluate_estimator(const BeliefEstimator& estimator,
                                  const std::vector<LabeledExample>& examples,
                                  EvalMode mode) {
  if (examples.empty()) throw DomainError("labeled set is empty");
  return mode == EvalMode::kBinary ? evaluate_binary(estimator, examples)
                                   : evaluate_pairwise(estimator, examples);
}

}  // namespace beda::belief
