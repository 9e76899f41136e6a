#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "beda/belief/belief_vector.hpp"
#include "beda/belief/dialogue_context.hpp"
#include "beda/belief/estimator.hpp"
#include "beda/belief/training_data.hpp"
#include "beda/belief/world_set.hpp"
#include "beda/errors.hpp"
#include "beda/games/casino.hpp"
#include "beda/util.hpp"
#include "support.hpp"

using namespace beda::belief;

namespace {

WorldSet numbered(std::size_t n) {
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) texts.push_back("Event number " + std::to_string(i) + ".");
  return WorldSet::from_texts(texts);
}

DialogueContext dialogue(std::vector<std::pair<std::string, std::string>> turns) {
  DialogueContext ctx;
  ctx.task = "t";
  for (auto& [s, t] : turns) ctx.turns.push_back(Turn{s, t});
  return ctx;
}

std::set<std::string> simple_tokens(const std::string& text) {
  std::set<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur == "three") cur = "3";
    if (!cur.empty() && cur != "the") out.insert(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

WorldSet triple_world() {
  return WorldSet({make_triple_event(0, "Alex", "School", "Redlands"),
                   make_triple_event(1, "Alex", "School", "Tufts"),
                   make_triple_event(2, "Alex", "Major", "Physics"),
                   make_triple_event(3, "Alex", "Major", "History")});
}

TruthTranscript transcript_with_turns(const std::string& id, std::size_t n_turns,
                                      const WorldSet& ws, const EventIdSet& truth) {
  TruthTranscript tr;
  tr.episode_id = id;
  tr.world_set = ws;
  for (std::size_t i = 0; i < n_turns; ++i) {
    tr.context.turns.push_back(Turn{i % 2 ? "B" : "A", "line " + std::to_string(i)});
  }
  tr.truth_after_turn.assign(n_turns + 1, TruthSnapshot{{Perspective::kOpponentKnows, truth}});
  return tr;
}

std::shared_ptr<OracleEstimator> text_oracle(std::set<std::string> true_texts) {
  return std::make_shared<OracleEstimator>(
      [true_texts](const DialogueContext&, const WorldSet& ws, Perspective) {
        EventIdSet out;
        for (const auto& e : ws.events()) {
          if (true_texts.count(e.text)) out.insert(e.id);
        }
        return out;
      });
}

}  // namespace

TEST_CASE("world set validation and lookup") {
  auto ws = WorldSet::from_texts({"a.", "b."});
  CHECK(ws.size() == 2);
  CHECK(ws[1].text == "b.");
  CHECK_THROWS_AS(ws[2], std::out_of_range);
  CHECK_THROWS_AS(WorldSet(std::vector<Event>{}), beda::DomainError);
  CHECK_THROWS_AS(WorldSet({Event{1, "x", {}}}), beda::DomainError);
  CHECK_THROWS_AS(WorldSet({Event{0, "", {}}}), beda::DomainError);
}

TEST_CASE("triple events carry their fields") {
  auto e = make_triple_event(4, "Alex", "School", "University of Redlands");
  CHECK(e.text == "The Alex suspects the School of the mutual friend is University of Redlands.");
  CHECK(is_triple_event(e));
  CHECK_FALSE(is_triple_event(Event{0, "x", {}}));
}

TEST_CASE("perspective names round-trip") {
  for (auto p : {Perspective::kSelfTruth, Perspective::kOpponentKnows}) {
    CHECK(perspective_from_string(to_string(p)) == p);
  }
  CHECK(to_string(Perspective::kSelfTruth) == "self_truth");
  CHECK(to_string(Perspective::kOpponentKnows) == "opponent_knows");
  CHECK_THROWS_AS(perspective_from_string("both"), beda::DomainError);
}

TEST_CASE("belief vector range and threshold") {
  CHECK_THROWS_AS(BeliefVector(Perspective::kSelfTruth, {0.2, 1.1}), beda::DomainError);
  CHECK_THROWS_AS(BeliefVector(Perspective::kSelfTruth, {-0.01}), beda::DomainError);
  BeliefVector v(Perspective::kSelfTruth, {0.5, 0.49, 1.0, 0.0});
  CHECK(v.known() == EventIdSet{0, 2});
}

TEST_CASE("belief gap") {
  // 0-based ids 0,3,4,6 are events 1,4,5,7 of the printed case.
  const EventIdSet truth{0, 3, 4, 6};
  const EventIdSet predicted{0, 3};
  auto v = oracle_estimate(predicted, numbered(8), Perspective::kOpponentKnows);
  CHECK(belief_gap(v, truth) == 2);
  CHECK(belief_gap(oracle_estimate(truth, numbered(8), Perspective::kOpponentKnows), truth) == 0);
  auto none = oracle_estimate({}, numbered(8), Perspective::kOpponentKnows);
  CHECK(belief_gap(none, truth) == truth.size());
  CHECK_THROWS_AS(belief_gap(none, EventIdSet{8}), beda::DomainError);
}

TEST_CASE("oracle estimate is an indicator") {
  auto v = oracle_estimate({0, 2}, numbered(4), Perspective::kSelfTruth);
  CHECK(v.values() == std::vector<double>{1, 0, 1, 0});
  CHECK(oracle_estimate({}, numbered(3), Perspective::kSelfTruth).values() ==
        std::vector<double>{0, 0, 0});
  CHECK(oracle_estimate({0, 1, 2}, numbered(3), Perspective::kSelfTruth).values() ==
        std::vector<double>{1, 1, 1});
  CHECK_THROWS_AS(oracle_estimate({3}, numbered(3), Perspective::kSelfTruth), beda::DomainError);
}

TEST_CASE("oracle estimator reproduces a ground-truth state") {
  OracleEstimator est([](const DialogueContext&, const WorldSet&, Perspective) {
    return EventIdSet{0, 3, 4, 6};
  });
  auto v = est.estimate(dialogue({}), numbered(8), Perspective::kOpponentKnows);
  CHECK(v.perspective() == Perspective::kOpponentKnows);
  CHECK(v.values() == std::vector<double>{1, 0, 0, 1, 1, 0, 1, 0});
}

TEST_CASE("estimators reject an empty world set") {
  KeywordEstimator kw;
  CHECK_THROWS_AS(kw.estimate(dialogue({}), WorldSet(), Perspective::kSelfTruth), beda::DomainError);
}

TEST_CASE("random estimate") {
  auto ws = numbered(5);
  auto a = random_estimate(7, ws);
  CHECK(a == random_estimate(7, ws));
  for (double x : a.values()) CHECK((x == 0.0 || x == 1.0));

  auto ws16 = numbered(16);
  int identical = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    if (random_estimate(2 * s + 1, ws16).values() == random_estimate(2 * s + 2, ws16).values()) {
      ++identical;
    }
  }
  // Expected count 1000 / 65536.
  CHECK(identical <= 2);

  std::vector<double> sums(5, 0.0);
  for (std::uint64_t s = 0; s < 10000; ++s) {
    auto v = random_estimate(beda::derive_seed(99, s), ws);
    for (std::size_t i = 0; i < 5; ++i) sums[i] += v[i];
  }
  for (double s : sums) CHECK(std::abs(s / 10000 - 0.5) <= 0.02);
}

TEST_CASE("random estimator is seeded by the context") {
  RandomEstimator est(42);
  auto ctx = dialogue({{"A", "hello"}});
  auto ws = numbered(12);
  CHECK(est.estimate(ctx, ws, Perspective::kSelfTruth) ==
        est.estimate(ctx, ws, Perspective::kSelfTruth));
  auto v = est.estimate(ctx, ws, Perspective::kOpponentKnows);
  CHECK(v.perspective() == Perspective::kOpponentKnows);
  CHECK(v.size() == 12);
}

TEST_CASE("keyword estimate") {
  const std::string event_text = "David opened the opaque Tupperware 3 hours ago";
  const std::string turn = "David opened the Tupperware three hours ago";
  auto ws = WorldSet::from_texts({event_text, "A noise is coming from the resin container."});

  const auto et = simple_tokens(event_text);
  const auto tt = simple_tokens(turn);
  std::size_t shared = 0;
  for (const auto& t : et) shared += tt.count(t);
  const double score = static_cast<double>(shared) / static_cast<double>(et.size());
  REQUIRE(score >= kKeywordThreshold);

  auto v = keyword_estimate(dialogue({{"Burglar John", turn}}), ws);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 0.0);

  CHECK(keyword_estimate(dialogue({}), ws).values() == std::vector<double>{0, 0});

  auto twice = keyword_estimate(dialogue({{"Burglar John", turn}, {"Burglar John", turn}}), ws);
  CHECK(twice == v);
}

TEST_CASE("keyword estimate is monotone in the context") {
  auto ws = WorldSet::from_texts({"The red box holds a coin.", "A dog barks loudly.",
                                  "The keeper opened the red box 3 hours ago."});
  std::vector<std::string> lines = {"Is there a coin?", "I heard a dog.", "The red box, maybe.",
                                    "Three hours ago someone opened it.", "Nothing else."};
  DialogueContext ctx;
  auto prev = keyword_estimate(ctx, ws);
  for (const auto& l : lines) {
    ctx.turns.push_back(Turn{"X", l});
    auto next = keyword_estimate(ctx, ws);
    for (std::size_t i = 0; i < ws.size(); ++i) CHECK(next[i] >= prev[i]);
    prev = next;
  }
}

TEST_CASE("keyword estimate matches triple events on their value") {
  auto ws = triple_world();
  auto v = keyword_estimate(dialogue({{"Alex", "My friend went to Redlands for school."}}), ws);
  CHECK(v.known() == EventIdSet{0});
}

TEST_CASE("content tokens normalize number words") {
  CHECK(content_tokens("Three hours") == content_tokens("3 hours"));
  CHECK(content_tokens("The A an") .empty());
}

TEST_CASE("dialogue context render and parse") {
  auto ctx = dialogue({{"A", "hi"}, {"SYSTEM", "Pick now."}, {"B", "multi\nline"}});
  ctx.background = "You are A.\nYou know: x";
  const std::string r = ctx.render();
  CHECK(r == "Background: You are A. You know: x\nA: hi\nSYSTEM: Pick now.\nB: multi line");
  auto back = DialogueContext::parse(r);
  CHECK(back.background == "You are A. You know: x");
  REQUIRE(back.turns.size() == 3);
  CHECK(back.turns[2] == Turn{"B", "multi line"});
  CHECK(ctx.clipped(2).turns.size() == 1);
  CHECK(ctx.clipped(9).turns.empty());
}

TEST_CASE("training data from a triple world") {
  auto ws = triple_world();
  auto tr = transcript_with_turns("ep-1", 2, ws, {0});
  auto out = emit_training_data({tr}, ClipPolicy{{0}}, 1, 5);
  REQUIRE(out.size() == 2);
  CHECK(out[0].label);
  CHECK_FALSE(out[1].label);
  CHECK(out[0].event == ws[0]);
  const auto& neg = out[1].event;
  CHECK(is_triple_event(neg));
  CHECK((neg.payload.at("attribute") != "School" || neg.payload.at("value") != "Redlands"));
  CHECK(out[0].context == tr.context);
}

TEST_CASE("training data for plain events labels every event") {
  auto ws = numbered(3);
  auto tr = transcript_with_turns("ep-2", 4, ws, {1});
  auto out = emit_training_data({tr}, ClipPolicy{{0}}, 1, 5);
  REQUIRE(out.size() == 3);
  CHECK_FALSE(out[0].label);
  CHECK(out[1].label);
  CHECK_FALSE(out[2].label);
}

TEST_CASE("training data clip distribution") {
  auto ws = numbered(1);
  std::vector<TruthTranscript> trs;
  for (int i = 0; i < 10000; ++i) trs.push_back(transcript_with_turns("e" + std::to_string(i), 5, ws, {0}));
  auto out = emit_training_data(trs, ClipPolicy{}, 0, 21);
  REQUIRE(out.size() == 10000);
  std::map<std::size_t, int> buckets;
  for (const auto& ex : out) ++buckets[5 - ex.context.turns.size()];
  REQUIRE(buckets.size() == 4);
  for (const auto& [drop, count] : buckets) {
    CHECK(drop <= 3);
    CHECK(std::abs(count / 10000.0 - 0.25) <= 0.02);
  }
}

TEST_CASE("training data is a pure function of inputs and seed") {
  auto ws = triple_world();
  std::vector<TruthTranscript> trs;
  for (int i = 0; i < 30; ++i) trs.push_back(transcript_with_turns("e" + std::to_string(i), 6, ws, {0, 2}));
  auto a = emit_training_data(trs, ClipPolicy{}, 1, 77);
  auto b = emit_training_data(trs, ClipPolicy{}, 1, 77);
  CHECK(a == b);
  std::string da;
  std::string db;
  for (const auto& ex : a) da += to_json(ex).dump() + "\n";
  for (const auto& ex : b) db += to_json(ex).dump() + "\n";
  CHECK(da == db);
}

TEST_CASE("training data errors name the episode") {
  auto ws = numbered(2);
  auto bad = transcript_with_turns("episode-xyz", 3, ws, {0});
  bad.truth_after_turn.pop_back();
  CHECK_THROWS_WITH_AS(emit_training_data({bad}, ClipPolicy{}, 1, 1),
                       doctest::Contains("episode-xyz"), beda::DataError);
  auto empty = transcript_with_turns("episode-abc", 3, ws, {0});
  for (auto& snap : empty.truth_after_turn) snap.clear();
  CHECK_THROWS_WITH_AS(emit_training_data({empty}, ClipPolicy{{0}}, 1, 1),
                       doctest::Contains("episode-abc"), beda::DataError);
  CHECK_THROWS_AS(emit_training_data({}, ClipPolicy{{}}, 1, 1), beda::DomainError);
}

TEST_CASE("labeled example file round-trip") {
  beda::test::TempDir dir("labeled");
  auto ws = numbered(2);
  auto tr = transcript_with_turns("e", 3, ws, {1});
  auto out = emit_training_data({tr}, ClipPolicy{{1}}, 0, 3);
  write_labeled_examples(dir.file("x.jsonl"), out);
  auto back = read_labeled_examples(dir.file("x.jsonl"));
  REQUIRE(back.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(back[i].context == out[i].context);
    CHECK(back[i].event.text == out[i].event.text);
    CHECK(back[i].label == out[i].label);
    CHECK(back[i].perspective == out[i].perspective);
  }
  auto line = to_json(out[0]);
  CHECK(line.size() == 4);
  CHECK(line.contains("context"));
  CHECK(line.contains("event"));
  CHECK(line.contains("perspective"));
  CHECK(line.contains("label"));

  beda::test::write_file(dir.file("bad.jsonl"), line.dump() + "\n{\"context\": \n");
  try {
    read_labeled_examples(dir.file("bad.jsonl"));
    FAIL("expected a load error");
  } catch (const beda::LoadError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("binary evaluation of the oracle on its own labels") {
  auto ws = numbered(4);
  auto tr = transcript_with_turns("e", 2, ws, {0, 3});
  auto examples = emit_training_data({tr}, ClipPolicy{{0}}, 0, 1);
  auto oracle = text_oracle({ws[0].text, ws[3].text});
  auto report = evaluate_estimator(*oracle, examples, EvalMode::kBinary);
  CHECK(report.examples == 4);
  CHECK(report.accuracy == 1.0);
  CHECK(report.per_perspective.at(Perspective::kOpponentKnows).accuracy == 1.0);

  auto wrong = text_oracle({ws[1].text});
  CHECK(evaluate_estimator(*wrong, examples, EvalMode::kBinary).accuracy == doctest::Approx(0.25));
  CHECK_THROWS_AS(evaluate_estimator(*oracle, {}, EvalMode::kBinary), beda::DomainError);
}

TEST_CASE("pairwise score over the six permutations") {
  using namespace beda::games;
  const std::vector<std::string> truth = {"water", "firewood", "food"};
  std::multiset<double> scores;
  for (const auto& r : kRankings) {
    std::vector<std::string> pred;
    for (auto res : r) pred.emplace_back(to_string(res));
    scores.insert(pairwise_accuracy(pred, truth));
  }
  CHECK(pairwise_accuracy({"food", "firewood", "water"}, truth) == 0.0);
  CHECK(pairwise_accuracy({"water", "food", "firewood"}, truth) == doctest::Approx(2.0 / 3));
  std::multiset<double> expected{1.0, 2.0 / 3, 2.0 / 3, 1.0 / 3, 1.0 / 3, 0.0};
  REQUIRE(scores.size() == expected.size());
  auto a = scores.begin();
  for (auto b = expected.begin(); b != expected.end(); ++a, ++b) CHECK(*a == doctest::Approx(*b));
  CHECK_THROWS_AS(pairwise_accuracy({"a"}, {"a"}), beda::DomainError);
  CHECK_THROWS_AS(pairwise_accuracy({"a", "b"}, {"a", "c"}), beda::DomainError);
}

TEST_CASE("pairwise evaluation picks the top-scored permutation") {
  using namespace beda::games;
  auto ws = casino_world_set("Ann", "Bob");
  DialogueContext ctx = dialogue({{"Ann", "I need water."}});
  std::vector<LabeledExample> group;
  for (std::size_t r = 0; r < 6; ++r) {
    group.push_back(LabeledExample{ctx, ws[casino_event_id(0, r, false)],
                                   Perspective::kOpponentKnows, r == 0});
  }
  auto reversed = ranking_index(Ranking{Resource::kFood, Resource::kFirewood, Resource::kWater});
  auto pick = text_oracle({ws[casino_event_id(0, reversed, false)].text});
  CHECK(evaluate_estimator(*pick, group, EvalMode::kPairwise).accuracy == 0.0);
  auto right = text_oracle({ws[casino_event_id(0, 0, false)].text});
  auto report = evaluate_estimator(*right, group, EvalMode::kPairwise);
  CHECK(report.examples == 1);
  CHECK(report.accuracy == 1.0);
  CHECK(to_json(report)["mode"] == "pairwise");
}
