#include <doctest.h>

#include <atomic>
#include <random>
#include <sstream>

#include "beda/errors.hpp"
#include "beda/generation/action.hpp"
#include "beda/generation/baseline_templates.hpp"
#include "beda/generation/generator.hpp"
#include "beda/generation/prompt.hpp"
#include "beda/selection/condition.hpp"
#include "beda/util.hpp"
#include "goldens.hpp"
#include "support.hpp"

using namespace beda;
using namespace beda::generation;

namespace {

std::string fixture(const std::string& name) { return test::read_file(test::fixture_path(name)); }

std::size_t reference_token_count(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  std::size_t n = 0;
  while (in >> word) ++n;
  return n;
}

// Counts calls and answers with the stage name.
class StageEcho final : public Generator {
 public:
  mutable std::atomic<int> calls{0};
  std::string name() const override { return "stage_echo"; }

 private:
  Completion do_complete(const Prompt& p) const override {
    ++calls;
    std::string t = p.key.stage.empty() ? "plain" : p.key.stage;
    return Completion{t, {t}, {}};
  }
};

class Constant final : public Generator {
 public:
  explicit Constant(std::string text) : text_(std::move(text)) {}
  std::string name() const override { return "constant"; }
  mutable Prompt last;

 private:
  Completion do_complete(const Prompt& p) const override {
    last = p;
    return Completion{text_, {text_}, {}};
  }
  std::string text_;
};

using test::ckbg_request;
using test::kCaseBlock;

}  // namespace

TEST_CASE("notice templates match the golden files") {
  CHECK(std::string(notice_template(GameId::kCkbg)) + "\n" == fixture("templates/ckbg.txt"));
  CHECK(std::string(notice_template(GameId::kMf)) + "\n" == fixture("templates/mf.txt"));
  CHECK(std::string(notice_template(GameId::kCasino)) + "\n" == fixture("templates/casino.txt"));
  CHECK(std::string(kMfNoticeTemplate).find("whether there a friend in your friend list that meet") !=
        std::string::npos);
}

TEST_CASE("rendered CKBG prompt") {
  belief::DialogueContext ctx;
  ctx.turns = {{"Burglar John", "Where is the watch?"}};
  auto p = render_prompt(ckbg_request(), ctx);
  CHECK(p.system + "\n" == fixture("prompts/ckbg.txt"));
  CHECK(p.system.find("1. Context: There is") != std::string::npos);
  CHECK(p.system.find("2. Your opponent's belief state: - The keeper") != std::string::npos);
  REQUIRE(p.turns.size() == 1);
  CHECK(p.turns[0].role == PromptRole::kInterlocutor);
  CHECK(p.key == PromptKey{GameId::kCkbg, "keeper", 0, ""});
}

TEST_CASE("rendered MF prompt") {
  auto r = test::mf_request();
  auto p = render_prompt(r, {});
  CHECK(p.system + "\n" == fixture("prompts/mf.txt"));
  CHECK(p.system.find("Alex currently considers the attributes of the mutual friend to be: "
                      "**School: University of Redlands.**") != std::string::npos);
}

TEST_CASE("rendered CaSiNo prompt") {
  auto r = test::casino_request();
  auto p = render_prompt(r, {});
  CHECK(p.system + "\n" == fixture("prompts/casino.txt"));
  CHECK(p.system.find("3. In fact, for you, the most") != std::string::npos);
}

TEST_CASE("missing slot names the placeholder") {
  auto r = ckbg_request();
  r.slots.erase("task");
  CHECK_THROWS_WITH_AS(render_prompt(r, {}), doctest::Contains("[task]"), TemplateError);
  CHECK_THROWS_AS(fill_template("a [b] c", {}), TemplateError);
  CHECK(fill_template("a [b] c [not a slot", {{"b", "B"}}) == "a B c [not a slot");
}

TEST_CASE("fallback condition renders the unconditioned prompt") {
  auto r = ckbg_request();
  r.condition->fallback = true;
  r.extra_block = "extra";
  CHECK(render_prompt(r, {}).system == "You are the keeper Jacob.\n\nextra");
  r.condition.reset();
  r.extra_block.clear();
  CHECK(render_prompt(r, {}).system == "You are the keeper Jacob.");
  r.background.clear();
  CHECK_THROWS_AS(render_prompt(r, {}), TemplateError);
}

TEST_CASE("prompt roles and turn index") {
  auto r = ckbg_request();
  belief::DialogueContext ctx;
  ctx.turns = {{"Burglar John", "q"}, {"Keeper Jacob", "a"}, {"Burglar John", "q2"},
               {"Keeper Jacob", "a2"}, {"SYSTEM", "choose"}};
  auto p = render_prompt(r, ctx);
  CHECK(p.key.turn_index == 2);
  CHECK(p.turns[1].role == PromptRole::kSelf);
  CHECK(p.turns[4].role == PromptRole::kSystem);
  CHECK(render_prompt(r, ctx) == p);
  auto j = to_json(p);
  CHECK(j["key"]["turn_index"] == 2);
}

TEST_CASE("scripted generation") {
  ScriptedGenerator gen;
  gen.add(GameId::kCkbg, "keeper", 0, "The watch is safe.");
  Prompt p;
  p.key = PromptKey{GameId::kCkbg, "keeper", 0, ""};
  auto u = generate(gen, p);
  CHECK(u.text == "The watch is safe.");
  CHECK(u.token_count == 4);
  CHECK(u.format_ok);
  p.key.turn_index = 1;
  CHECK_THROWS_AS(generate(gen, p), DataError);

  ScriptedGenerator with_policy({}, [](const Prompt& q) { return "turn " + std::to_string(q.key.turn_index); });
  CHECK(generate(with_policy, p).text == "turn 1");

  ScriptedGenerator empty;
  empty.add(GameId::kMf, "player_a", 0, "  ");
  Prompt q;
  q.key = PromptKey{GameId::kMf, "player_a", 0, ""};
  auto e = generate(empty, q);
  CHECK_FALSE(e.format_ok);
}

TEST_CASE("token count matches a stream split") {
  std::mt19937_64 rng(12);
  const std::string alphabet = "ab1. \t\n\r\v\f";
  std::uniform_int_distribution<std::size_t> len(0, 40);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = len(rng);
    for (std::size_t k = 0; k < n; ++k) s.push_back(alphabet[pick(rng)]);
    CHECK(whitespace_token_count(s) == reference_token_count(s));
  }
}

TEST_CASE("chain-of-thought wrapper") {
  auto inner = std::make_shared<Constant>("I think the tupperware is safer.\nReply: Check the tupperware.");
  auto cot = wrap_cot(inner);
  Prompt p;
  p.system = "sys";
  auto u = generate(*cot, p);
  CHECK(u.text == "Check the tupperware.");
  CHECK(inner->last.system.find(baseline_templates::kCotInstruction) != std::string::npos);
  CHECK(u.raw.size() == 1);

  auto twice = wrap_cot(wrap_cot(inner));
  generate(*twice, p);
  const auto& sys = inner->last.system;
  const auto first = sys.find(baseline_templates::kCotInstruction);
  REQUIRE(first != std::string::npos);
  CHECK(sys.find(baseline_templates::kCotInstruction, first + 1) != std::string::npos);

  auto no_delim = wrap_cot(std::make_shared<Constant>("Just this."));
  auto v = generate(*no_delim, p);
  CHECK(v.text == "Just this.");
  CHECK(std::find(v.flags.begin(), v.flags.end(), "reply_delimiter_missing") != v.flags.end());

  auto empty = wrap_cot(std::make_shared<Constant>("Reasoning.\nReply:   "));
  CHECK_FALSE(generate(*empty, p).format_ok);
}

TEST_CASE("self-reflect wrapper") {
  auto echo = std::make_shared<StageEcho>();
  auto reflect = wrap_self_reflect(echo);
  Prompt p;
  p.system = "sys";
  auto u = generate(*reflect, p);
  CHECK(u.text == "revision");
  CHECK(echo->calls == 3);
  CHECK(u.raw == std::vector<std::string>{"draft", "critique", "revision"});
  CHECK(generate(*reflect, p).text == u.text);

  ScriptedGenerator table;
  table.add(GameId::kCkbg, "keeper", 0, "d", "draft");
  table.add(GameId::kCkbg, "keeper", 0, "c", "critique");
  table.add(GameId::kCkbg, "keeper", 0, "r", "revision");
  auto scripted = wrap_self_reflect(std::make_shared<ScriptedGenerator>(table));
  Prompt q;
  q.system = "s";
  q.key = PromptKey{GameId::kCkbg, "keeper", 0, ""};
  CHECK(generate(*scripted, q).text == "r");
}

TEST_CASE("all-belief listing") {
  auto ws = belief::WorldSet::from_texts({"A.", "B."});
  belief::BeliefVector s(belief::Perspective::kSelfTruth, {0.0, 0.0});
  belief::BeliefVector o(belief::Perspective::kOpponentKnows, {0.0, 0.0});
  auto text = minddial_condition(s, o, ws);
  CHECK(split_lines(text).size() == 2);
  belief::BeliefVector s2(belief::Perspective::kSelfTruth, {1.0, 0.25});
  belief::BeliefVector o2(belief::Perspective::kOpponentKnows, {0.5, 1.0});
  auto text2 = minddial_condition(s2, o2, ws);
  CHECK(text2 == "- A. (true: 1.00; opponent knows: 0.50)\n- B. (true: 0.25; opponent knows: 1.00)");
  belief::BeliefVector short_v(belief::Perspective::kSelfTruth, {1.0});
  CHECK_THROWS_AS(minddial_condition(short_v, o, ws), DomainError);
}

TEST_CASE("CKBG action parsing") {
  ActionVocabulary v{{"resin container", "opaque Tupperware"}, {}};
  auto a = parse_action(GameId::kCkbg, "[STOP] Burglar chosed: opaque Tupperware.", v);
  CHECK(a.kind == ParsedAction::Kind::kStopChoice);
  CHECK(a.container == "opaque Tupperware");
  CHECK(parse_action(GameId::kCkbg, "[STOP] I pick both containers", v).kind ==
        ParsedAction::Kind::kFormatError);
  CHECK(parse_action(GameId::kCkbg, "[STOP] resin container or opaque tupperware", v).kind ==
        ParsedAction::Kind::kFormatError);
  CHECK(parse_action(GameId::kCkbg, "Is it in the resin container?", v).kind == ParsedAction::Kind::kUtterance);
  CHECK(parse_action(GameId::kCkbg, "the RESIN CONTAINER", v, ActionPosition::kTerminal).container ==
        "resin container");
  CHECK(parse_action(GameId::kCkbg, "no idea", v, ActionPosition::kTerminal).kind ==
        ParsedAction::Kind::kFormatError);
  ActionVocabulary nested{{"box", "red box"}, {}};
  CHECK(parse_action(GameId::kCkbg, "[STOP] the red box", nested).container == "red box");
}

TEST_CASE("MF action parsing") {
  ActionVocabulary v{{}, {{"Tufts", "Physics"}, {"Redlands", "History"}, {"Redlands", "Physics"}}};
  CHECK(parse_action(GameId::kMf, "SELECT: 2", v, ActionPosition::kTerminal).friend_index == 1);
  CHECK(parse_action(GameId::kMf, "SELECT: 4", v, ActionPosition::kTerminal).kind ==
        ParsedAction::Kind::kFormatError);
  auto byval = parse_action(GameId::kMf, "The one from Redlands who studies history.", v, ActionPosition::kTerminal);
  CHECK(byval.kind == ParsedAction::Kind::kFriendPick);
  CHECK(byval.friend_index == 1);
  CHECK(parse_action(GameId::kMf, "Redlands and Physics and Tufts", v, ActionPosition::kTerminal).kind ==
        ParsedAction::Kind::kFormatError);
  CHECK(parse_action(GameId::kMf, "SELECT: 1", v).kind == ParsedAction::Kind::kUtterance);
}

TEST_CASE("CaSiNo deal parsing") {
  ActionVocabulary v;
  auto a = parse_action(GameId::kCasino, "DEAL: food=2, water=1, firewood=0", v);
  CHECK(a.kind == ParsedAction::Kind::kDeal);
  CHECK(a.deal == Deal{2, 1, 0});
  CHECK(parse_action(GameId::kCasino, "Sounds good.\nDEAL: food=1, water=2, firewood=3", v).deal == Deal{1, 2, 3});
  CHECK(parse_action(GameId::kCasino, "DEAL: food=two", v).kind == ParsedAction::Kind::kFormatError);
  CHECK(parse_action(GameId::kCasino, "DEAL: food=1, water=1, firewood=1\nDEAL: food=2, water=1, firewood=1", v)
            .kind == ParsedAction::Kind::kFormatError);
  CHECK(parse_action(GameId::kCasino, "I want water.", v).kind == ParsedAction::Kind::kUtterance);
  for (int f = 0; f <= 3; ++f) {
    for (int w = 0; w <= 3; ++w) {
      for (int x = 0; x <= 3; ++x) {
        Deal d{f, w, x};
        CHECK(parse_action(GameId::kCasino, render_deal(d), v).deal == d);
      }
    }
  }
}
