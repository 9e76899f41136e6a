#include "beda/belief/dialogue_context.hpp"

#include "beda/util.hpp"

namespace beda::belief {

namespace {
constexpr std::string_view kBackgroundPrefix = "Background: ";

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}
}

std::string DialogueContext::render() const {
  std::vector<std::string> lines;
  if (!background.empty()) lines.push_back(std::string(kBackgroundPrefix) + one_line(background));
  for (const auto& t : turns) lines.push_back(t.speaker + ": " + one_line(t.text));
  return join(lines, "\n");
}

DialogueContext DialogueContext::parse(const std::string& rendered) {
  DialogueContext ctx;
  if (rendered.empty()) return ctx;
  bool first = true;
  for (auto& line : split_lines(rendered)) {
    if (first && line.rfind(kBackgroundPrefix, 0) == 0) {
      ctx.background = line.substr(kBackgroundPrefix.size());
      first = false;
      continue;
    }
    first = false;
    auto sep = line.find(": ");
    if (sep == std::string::npos) {
      ctx.turns.push_back(Turn{"", line});
      continue;
    }
    ctx.turns.push_back(Turn{line.substr(0, sep), line.substr(sep + 2)});
  }
  return ctx;
}

DialogueContext DialogueContext::clipped(std::size_t drop_final_turns) const {
  DialogueContext out = *this;
  const std::size_t keep =
      drop_final_turns >= turns.size() ? 0 : turns.size() - drop_final_turns;
  out.turns.resize(keep);
  return out;
}

}  // namespace beda::belief
