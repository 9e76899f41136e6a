#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "beda/belief/remote_estimator.hpp"
#include "beda/errors.hpp"
#include "beda/generation/generator.hpp"
#include "beda/http_client.hpp"
#include "support.hpp"

using namespace beda;
using beda::test::LocalServer;

namespace {

belief::DialogueContext two_turns() {
  belief::DialogueContext ctx;
  ctx.background = "bg";
  ctx.turns = {{"A", "hello"}, {"B", "hi there"}};
  return ctx;
}

belief::RemoteEstimatorConfig estimator_config(const std::string& url, int retries) {
  belief::RemoteEstimatorConfig cfg;
  cfg.endpoint = url;
  cfg.retry.retries = retries;
  cfg.retry.initial_backoff = std::chrono::milliseconds(1);
  cfg.retry.timeout = std::chrono::milliseconds(2000);
  return cfg;
}

generation::GeneratorConfig generator_config(const std::string& url, int retries) {
  generation::GeneratorConfig cfg;
  cfg.backend = generation::GeneratorConfig::Backend::kRemote;
  cfg.endpoint = url;
  cfg.model = "test-model";
  cfg.api_key = "k-123";
  cfg.retries = retries;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  return cfg;
}

nlohmann::json chat_reply(const std::string& text) {
  return {{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}}};
}

}  // namespace

TEST_CASE("endpoint parsing") {
  auto ep = http::parse_endpoint("http://127.0.0.1:8765/estimate");
  CHECK(ep.origin == "http://127.0.0.1:8765");
  CHECK(ep.path == "/estimate");
  CHECK(http::parse_endpoint("http://host").path == "/");
  CHECK_THROWS_AS(http::parse_endpoint("127.0.0.1:80/x"), ConfigError);
  CHECK_THROWS_AS(http::parse_endpoint("http:///x"), ConfigError);
}

TEST_CASE("estimation request document") {
  auto ws = belief::WorldSet::from_texts({"e one.", "e two."});
  auto req = belief::make_estimation_request(two_turns(), ws, belief::Perspective::kOpponentKnows);
  CHECK(req["context"] == "Background: bg\nA: hello\nB: hi there");
  CHECK(req["events"] == nlohmann::json::array({"e one.", "e two."}));
  CHECK(req["perspective"] == "opponent_knows");
  CHECK(req.size() == 3);
}

TEST_CASE("remote estimate passes probabilities through") {
  nlohmann::json seen;
  std::mutex mu;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/estimate", [&](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard<std::mutex> lock(mu);
      seen = nlohmann::json::parse(req.body);
      res.set_content(R"({"probabilities": [0.9, 0.1]})", "application/json");
    });
  });
  auto ws = belief::WorldSet::from_texts({"a.", "b."});
  belief::RemoteEstimator est(estimator_config(server.url("/estimate"), 0));
  auto v = est.estimate(two_turns(), ws, belief::Perspective::kSelfTruth);
  CHECK(v.values() == std::vector<double>{0.9, 0.1});
  CHECK(v.perspective() == belief::Perspective::kSelfTruth);
  CHECK(seen["perspective"] == "self_truth");
  CHECK(seen["events"].size() == 2);
}

TEST_CASE("remote estimate protocol errors") {
  std::string body;
  int status = 200;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/estimate", [&](const httplib::Request&, httplib::Response& res) {
      res.status = status;
      res.set_content(body, "application/json");
    });
  });
  auto ws = belief::WorldSet::from_texts({"a.", "b."});
  auto cfg = estimator_config(server.url("/estimate"), 0);
  auto call = [&] {
    return belief::remote_estimate(cfg, two_turns(), ws, belief::Perspective::kSelfTruth);
  };
  body = R"({"probabilities": [0.1, 0.2, 0.3]})";
  CHECK_THROWS_AS(call(), ProtocolError);
  body = R"({"probabilities": [0.1, 1.5]})";
  CHECK_THROWS_AS(call(), ProtocolError);
  body = R"({"probabilities": [0.1, "x"]})";
  CHECK_THROWS_AS(call(), ProtocolError);
  body = R"({"probs": [0.1, 0.2]})";
  CHECK_THROWS_AS(call(), ProtocolError);
  body = "not json";
  CHECK_THROWS_AS(call(), ProtocolError);
  body = R"({"probabilities": [0.1, 0.2]})";
  status = 400;
  CHECK_THROWS_AS(call(), ProtocolError);
  status = 200;
  CHECK_NOTHROW(call());
}

TEST_CASE("remote estimate gives up on an unreachable service") {
  const int port = test::closed_port();
  auto cfg = estimator_config("http://127.0.0.1:" + std::to_string(port) + "/estimate", 3);
  auto ws = belief::WorldSet::from_texts({"a."});
  CHECK_THROWS_WITH_AS(
      belief::remote_estimate(cfg, two_turns(), ws, belief::Perspective::kSelfTruth),
      doctest::Contains("4 attempt(s)"), TransportError);
}

TEST_CASE("retry counts against a failing server") {
  std::atomic<int> hits{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/x", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 503;
    });
  });
  http::RetryPolicy policy;
  policy.retries = 3;
  policy.initial_backoff = std::chrono::milliseconds(1);
  policy.retry_server_errors = true;
  CHECK_THROWS_AS(http::post_json(http::parse_endpoint(server.url("/x")), "{}", {}, policy),
                  TransportError);
  CHECK(hits == 4);

  hits = 0;
  policy.retry_server_errors = false;
  auto res = http::post_json(http::parse_endpoint(server.url("/x")), "{}", {}, policy);
  CHECK(res.status == 503);
  CHECK(res.attempts == 1);
  CHECK(hits == 1);
}

TEST_CASE("retry recovers after transient failures") {
  std::atomic<int> hits{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/x", [&](const httplib::Request&, httplib::Response& res) {
      if (++hits < 3) {
        res.status = 500;
        return;
      }
      res.set_content("ok", "text/plain");
    });
  });
  http::RetryPolicy policy;
  policy.retries = 2;
  policy.initial_backoff = std::chrono::milliseconds(1);
  policy.retry_server_errors = true;
  auto res = http::post_json(http::parse_endpoint(server.url("/x")), "{}", {}, policy);
  CHECK(res.status == 200);
  CHECK(res.attempts == 3);
  CHECK(res.body == "ok");
}

TEST_CASE("concurrent estimation requests") {
  LocalServer server([&](httplib::Server& s) {
    s.Post("/estimate", [&](const httplib::Request& req, httplib::Response& res) {
      auto doc = nlohmann::json::parse(req.body);
      nlohmann::json probs = nlohmann::json::array();
      for (std::size_t i = 0; i < doc["events"].size(); ++i) probs.push_back(i % 2 ? 0.25 : 0.75);
      res.set_content(nlohmann::json{{"probabilities", probs}}.dump(), "application/json");
    });
  });
  belief::RemoteEstimator est(estimator_config(server.url("/estimate"), 1));
  std::atomic<int> ok{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] {
      std::vector<std::string> texts;
      for (int i = 0; i <= t; ++i) texts.push_back("event " + std::to_string(i) + ".");
      auto v = est.estimate(two_turns(), belief::WorldSet::from_texts(texts),
                            belief::Perspective::kOpponentKnows);
      if (v.size() == static_cast<std::size_t>(t + 1) && v[0] == 0.75) ++ok;
    });
  }
  for (auto& th : pool) th.join();
  CHECK(ok == 8);
}

TEST_CASE("estimator endpoint from the environment") {
  ::unsetenv("EST_ENDPOINT");
  CHECK_THROWS_AS(belief::RemoteEstimatorConfig::from_env(), ConfigError);
  ::setenv("EST_ENDPOINT", "http://127.0.0.1:9/estimate", 1);
  CHECK(belief::RemoteEstimatorConfig::from_env().endpoint == "http://127.0.0.1:9/estimate");
  ::unsetenv("EST_ENDPOINT");
  belief::RemoteEstimatorConfig empty;
  CHECK_THROWS_AS(belief::remote_estimate(empty, two_turns(), belief::WorldSet::from_texts({"a."}),
                                          belief::Perspective::kSelfTruth),
                  ConfigError);
}

TEST_CASE("chat request maps turns onto roles") {
  generation::Prompt p;
  p.system = "sys";
  p.turns = {{generation::PromptRole::kInterlocutor, "u1"},
             {generation::PromptRole::kSelf, "a1"},
             {generation::PromptRole::kSystem, "pick"}};
  auto cfg = generator_config("http://x/v1", 0);
  cfg.temperature = 0.7;
  auto req = generation::RemoteChatGenerator::build_request(cfg, p);
  const auto& m = req["messages"];
  REQUIRE(m.size() == 4);
  CHECK(m[0]["role"] == "system");
  CHECK(m[0]["content"] == "sys");
  CHECK(m[1]["role"] == "user");
  CHECK(m[2]["role"] == "assistant");
  CHECK(m[3]["role"] == "system");
  CHECK(req["temperature"] == 0.7);
  CHECK(req["model"] == "test-model");
  CHECK(req["max_tokens"] == 512);
}

TEST_CASE("remote generator counts whitespace tokens") {
  std::string auth;
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat", [&](const httplib::Request& req, httplib::Response& res) {
      auth = req.get_header_value("Authorization");
      res.set_content(chat_reply("A B C").dump(), "application/json");
    });
  });
  generation::RemoteChatGenerator gen(generator_config(server.url("/v1/chat"), 0));
  generation::Prompt p;
  p.system = "s";
  auto u = generation::generate(gen, p);
  CHECK(u.text == "A B C");
  CHECK(u.token_count == 3);
  CHECK(u.raw == std::vector<std::string>{"A B C"});
  CHECK(auth == "Bearer k-123");
  CHECK(gen.name() == "remote:test-model");
}

TEST_CASE("remote generator retries then fails") {
  std::atomic<int> hits{0};
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 503;
    });
  });
  generation::RemoteChatGenerator gen(generator_config(server.url("/v1/chat"), 2));
  generation::Prompt p;
  p.system = "s";
  CHECK_THROWS_AS(gen.complete(p), TransportError);
  CHECK(hits == 3);

  const int port = test::closed_port();
  generation::RemoteChatGenerator down(
      generator_config("http://127.0.0.1:" + std::to_string(port) + "/v1/chat", 2));
  CHECK_THROWS_WITH_AS(down.complete(p), doctest::Contains("3 attempt(s)"), TransportError);
}

TEST_CASE("chat completion parsing") {
  using G = generation::RemoteChatGenerator;
  CHECK(G::parse_response(chat_reply("hi").dump()) == "hi");
  CHECK_THROWS_AS(G::parse_response("{"), ProtocolError);
  CHECK_THROWS_AS(G::parse_response(R"({"choices": []})"), ProtocolError);
  CHECK_THROWS_AS(G::parse_response(R"({"choices": [{"text": "x"}]})"), ProtocolError);
}

TEST_CASE("empty remote completion is a format error") {
  LocalServer server([&](httplib::Server& s) {
    s.Post("/v1/chat", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content(chat_reply("   ").dump(), "application/json");
    });
  });
  generation::RemoteChatGenerator gen(generator_config(server.url("/v1/chat"), 0));
  generation::Prompt p;
  p.system = "s";
  auto u = generation::generate(gen, p);
  CHECK_FALSE(u.format_ok);
  CHECK(u.token_count == 0);
}

TEST_CASE("generator configuration") {
  generation::GeneratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.backend = generation::GeneratorConfig::Backend::kRemote;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(generation::RemoteChatGenerator{cfg}, ConfigError);
  cfg.endpoint = "http://x/";
  cfg.temperature = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.temperature = 0;
  cfg.max_turn_tokens = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  ::setenv("GEN_ENDPOINT", "http://gen.local/v1", 1);
  ::setenv("GEN_API_KEY", "secret", 1);
  ::setenv("GEN_MODEL", "m1", 1);
  auto env = generation::GeneratorConfig::from_env();
  CHECK(env.endpoint == "http://gen.local/v1");
  CHECK(env.api_key == "secret");
  CHECK(env.model == "m1");
  ::unsetenv("GEN_ENDPOINT");
  ::unsetenv("GEN_API_KEY");
  ::unsetenv("GEN_MODEL");
}
