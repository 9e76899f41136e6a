#include "beda/generation/generator.hpp"

#include <cstdio>
#include <cstdlib>

#include "beda/errors.hpp"
#include "beda/generation/baseline_templates.hpp"
#include "beda/http_client.hpp"
#include "beda/util.hpp"

namespace beda::generation {

namespace bt = baseline_templates;

Utterance generate(const Generator& generator, const Prompt& prompt) {
  Completion c = generator.complete(prompt);
  Utterance u;
  u.text = trim(c.text);
  u.token_count = whitespace_token_count(u.text);
  u.format_ok = !u.text.empty();
  u.raw = std::move(c.raw);
  u.flags = std::move(c.flags);
  if (!u.format_ok) u.flags.push_back("empty_completion");
  return u;
}

GeneratorConfig GeneratorConfig::from_env() {
  GeneratorConfig cfg;
  cfg.backend = Backend::kRemote;
  if (const char* v = std::getenv("GEN_ENDPOINT")) cfg.endpoint = v;
  if (const char* v = std::getenv("GEN_API_KEY")) cfg.api_key = v;
  if (const char* v = std::getenv("GEN_MODEL")) cfg.model = v;
  return cfg;
}

void GeneratorConfig::validate() const {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (retries < 0) throw ConfigError("retries must be >= 0");
  if (max_turn_tokens == 0) throw ConfigError("max_turn_tokens must be positive");
  if (backend == Backend::kRemote && endpoint.empty()) {
    throw ConfigError("remote generator needs GEN_ENDPOINT");
  }
}

void ScriptedGenerator::add(GameId game, const std::string& role, std::size_t turn,
                            std::string text, const std::string& stage) {
  table_[Key{game, role, turn, stage}] = std::move(text);
}

Completion ScriptedGenerator::do_complete(const Prompt& prompt) const {
  const auto& k = prompt.key;
  auto it = table_.find(Key{k.game, k.role, k.turn_index, k.stage});
  if (it == table_.end() && !k.stage.empty()) {
    it = table_.find(Key{k.game, k.role, k.turn_index, ""});
  }
  std::string text;
  if (it != table_.end()) {
    text = it->second;
  } else if (policy_) {
    text = policy_(prompt);
  } else {
    throw DataError("no scripted line for (" + std::string(to_string(k.game)) + ", " +
                    k.role + ", " + std::to_string(k.turn_index) + ")");
  }
  return Completion{text, {text}, {}};
}

RemoteChatGenerator::RemoteChatGenerator(GeneratorConfig config) : config_(std::move(config)) {
  config_.validate();
}

nlohmann::json RemoteChatGenerator::build_request(const GeneratorConfig& config,
                                                  const Prompt& prompt) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", prompt.system}});
  for (const auto& t : prompt.turns) {
    const char* role = t.role == PromptRole::kSelf     ? "assistant"
                       : t.role == PromptRole::kSystem ? "system"
                                                       : "user";
    messages.push_back({{"role", role}, {"content", t.text}});
  }
  nlohmann::json req = {{"messages", std::move(messages)},
                        {"temperature", config.temperature},
                        {"max_tokens", config.max_turn_tokens}};
  if (!config.model.empty()) req["model"] = config.model;
  return req;
}

std::string RemoteChatGenerator::parse_response(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("chat completion is not JSON: ") + e.what());
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
    throw ProtocolError("chat completion has no choices");
  }
  const auto& msg = doc["choices"][0];
  if (!msg.contains("message") || !msg["message"].contains("content")) {
    throw ProtocolError("chat completion choice has no message content");
  }
  const auto& content = msg["message"]["content"];
  return content.is_string() ? content.get<std::string>() : std::string();
}

Completion RemoteChatGenerator::do_complete(const Prompt& prompt) const {
  http::RetryPolicy policy;
  policy.retries = config_.retries;
  policy.initial_backoff = config_.initial_backoff;
  policy.retry_server_errors = true;
  std::map<std::string, std::string> headers;
  if (!config_.api_key.empty()) headers["Authorization"] = "Bearer " + config_.api_key;

  const auto body = build_request(config_, prompt).dump();
  const auto res = http::post_json(http::parse_endpoint(config_.endpoint), body, headers, policy);
  if (res.status < 200 || res.status >= 300) {
    throw ProtocolError("generator returned HTTP " + std::to_string(res.status));
  }
  std::string text = parse_response(res.body);
  return Completion{text, {text}, {}};
}

Completion CotGenerator::do_complete(const Prompt& prompt) const {
  Prompt wrapped = prompt;
  wrapped.system += "\n\n";
  wrapped.system += bt::kCotInstruction;
  wrapped.system += " ";
  wrapped.system += bt::kCotFormatInstruction;
  Completion inner = inner_->complete(wrapped);

  Completion out;
  out.raw = inner.raw;
  out.flags = inner.flags;
  const auto pos = inner.text.rfind(bt::kReplyDelimiter);
  if (pos == std::string::npos) {
    out.text = inner.text;
    out.flags.push_back("reply_delimiter_missing");
  } else {
    out.text = trim(std::string_view(inner.text).substr(pos + bt::kReplyDelimiter.size()));
  }
  return out;
}

Completion SelfReflectGenerator::do_complete(const Prompt& prompt) const {
  Completion out;
  auto run = [&](Prompt p) {
    Completion c = inner_->complete(p);
    out.raw.insert(out.raw.end(), c.raw.begin(), c.raw.end());
    out.flags.insert(out.flags.end(), c.flags.begin(), c.flags.end());
    return trim(c.text);
  };

  Prompt draft_prompt = prompt;
  draft_prompt.key.stage = "draft";
  const std::string draft = run(draft_prompt);

  Prompt critique_prompt = prompt;
  critique_prompt.key.stage = "critique";
  critique_prompt.system += "\n\n" + std::string(bt::kDraftHeader) + "\n" + draft + "\n\n" +
                            std::string(bt::kCritiqueInstruction);
  const std::string critique = run(critique_prompt);

  Prompt revision_prompt = prompt;
  revision_prompt.key.stage = "revision";
  revision_prompt.system += "\n\n" + std::string(bt::kDraftHeader) + "\n" + draft + "\n\n" +
                            std::string(bt::kCritiqueHeader) + "\n" + critique + "\n\n" +
                            std::string(bt::kRevisionInstruction);
  out.text = run(revision_prompt);
  return out;
}

GeneratorPtr wrap_cot(GeneratorPtr inner) { return std::make_shared<CotGenerator>(std::move(inner)); }

GeneratorPtr wrap_self_reflect(GeneratorPtr inner) {
  return std::make_shared<SelfReflectGenerator>(std::move(inner));
}

std::string minddial_condition(const belief::BeliefVector& self_truth,
                               const belief::BeliefVector& opp_knows,
                               const belief::WorldSet& world_set) {
  if (self_truth.size() != world_set.size() || opp_knows.size() != world_set.size()) {
    throw DomainError("belief vectors do not match the world set");
  }
  std::vector<std::string> lines;
  for (const auto& e : world_set.events()) {
    char probs[64];
    std::snprintf(probs, sizeof(probs), " (true: %.2f; opponent knows: %.2f)", self_truth[e.id],
                  opp_knows[e.id]);
    lines.push_back("- " + e.text + probs);
  }
  return join(lines, "\n");
}

}  // namespace beda::generation
