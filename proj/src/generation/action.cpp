#include "beda/generation/action.hpp"

#include <regex>
#include <set>

#include "beda/util.hpp"

namespace beda::generation {

std::string render_deal(const Deal& deal) {
  return "DEAL: food=" + std::to_string(deal.food) + ", water=" + std::to_string(deal.water) +
         ", firewood=" + std::to_string(deal.firewood);
}

std::string_view to_string(ParsedAction::Kind kind) {
  switch (kind) {
    case ParsedAction::Kind::kUtterance:
      return "utterance";
    case ParsedAction::Kind::kStopChoice:
      return "stop_choice";
    case ParsedAction::Kind::kFriendPick:
      return "friend_pick";
    case ParsedAction::Kind::kDeal:
      return "deal";
    case ParsedAction::Kind::kFormatError:
      return "format_error";
  }
  return "utterance";
}

namespace {

ParsedAction format_error(std::string reason) {
  ParsedAction a;
  a.kind = ParsedAction::Kind::kFormatError;
  a.reason = std::move(reason);
  return a;
}

// Containers named in `segment`, case-insensitively; an occurrence lying
// inside a longer container name's occurrence does not count.
std::set<std::string> containers_named(const std::string& segment,
                                       const std::vector<std::string>& containers) {
  struct Hit {
    std::size_t begin, end;
    const std::string* name;
  };
  const std::string hay = to_lower(segment);
  std::vector<Hit> hits;
  for (const auto& c : containers) {
    const std::string needle = to_lower(c);
    if (needle.empty()) continue;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
      hits.push_back({pos, pos + needle.size(), &c});
    }
  }
  std::set<std::string> names;
  for (const auto& h : hits) {
    bool dominated = false;
    for (const auto& o : hits) {
      if (o.name != h.name && o.begin <= h.begin && o.end >= h.end &&
          (o.end - o.begin) > (h.end - h.begin)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) names.insert(*h.name);
  }
  return names;
}

ParsedAction parse_ckbg(const std::string& text, const ActionVocabulary& vocab,
                        ActionPosition position) {
  const auto stop = text.find(kStopToken);
  std::string segment;
  if (stop != std::string::npos) {
    segment = text.substr(stop + kStopToken.size());
    const auto end = segment.find_first_of(".\n");
    if (end != std::string::npos) segment.resize(end);
  } else if (position == ActionPosition::kTerminal) {
    segment = text;
  } else {
    ParsedAction a;
    a.kind = ParsedAction::Kind::kUtterance;
    return a;
  }
  const auto names = containers_named(segment, vocab.containers);
  if (names.size() != 1) {
    return format_error(names.empty() ? "no container named in the final choice"
                                      : "more than one container named in the final choice");
  }
  ParsedAction a;
  a.kind = ParsedAction::Kind::kStopChoice;
  a.container = *names.begin();
  return a;
}

ParsedAction parse_mf(const std::string& text, const ActionVocabulary& vocab,
                      ActionPosition position) {
  if (position != ActionPosition::kTerminal) return ParsedAction{};
  static const std::regex select_re(R"(SELECT:\s*(\d+))");
  std::smatch m;
  if (std::regex_search(text, m, select_re)) {
    const auto index = std::stoul(m[1].str());
    if (index >= 1 && index <= vocab.friends.size()) {
      ParsedAction a;
      a.kind = ParsedAction::Kind::kFriendPick;
      a.friend_index = index - 1;
      return a;
    }
    return format_error("selected friend number is out of range");
  }
  const std::string hay = to_lower(text);
  std::vector<std::size_t> matches;
  for (std::size_t i = 0; i < vocab.friends.size(); ++i) {
    bool all = !vocab.friends[i].empty();
    for (const auto& v : vocab.friends[i]) all = all && hay.find(to_lower(v)) != std::string::npos;
    if (all) matches.push_back(i);
  }
  if (matches.size() != 1) {
    return format_error(matches.empty() ? "final selection names no friend"
                                        : "final selection matches several friends");
  }
  ParsedAction a;
  a.kind = ParsedAction::Kind::kFriendPick;
  a.friend_index = matches.front();
  return a;
}

ParsedAction parse_casino(const std::string& text) {
  static const std::regex deal_re(
      R"(^\s*DEAL:\s*food\s*=\s*(\d+)\s*,\s*water\s*=\s*(\d+)\s*,\s*firewood\s*=\s*(\d+)\s*\.?\s*$)");
  std::vector<Deal> deals;
  for (const auto& line : split_lines(text)) {
    const std::string t = trim(line);
    if (t.rfind("DEAL:", 0) != 0) continue;
    std::smatch m;
    if (!std::regex_match(t, m, deal_re)) return format_error("malformed DEAL line");
    try {
      Deal d{std::stoi(m[1].str()), std::stoi(m[2].str()), std::stoi(m[3].str())};
      if (std::find(deals.begin(), deals.end(), d) == deals.end()) deals.push_back(d);
    } catch (const std::out_of_range&) {
      return format_error("DEAL quantity out of range");
    }
  }
  if (deals.size() > 1) return format_error("conflicting DEAL lines");
  ParsedAction a;
  if (deals.size() == 1) {
    a.kind = ParsedAction::Kind::kDeal;
    a.deal = deals.front();
  }
  return a;
}

}  // namespace

ParsedAction parse_action(GameId game, const std::string& text,
                          const ActionVocabulary& vocabulary, ActionPosition position) {
  switch (game) {
    case GameId::kCkbg:
      return parse_ckbg(text, vocabulary, position);
    case GameId::kMf:
      return parse_mf(text, vocabulary, position);
    case GameId::kCasino:
      return parse_casino(text);
  }
  return ParsedAction{};
}

}  // namespace beda::generation
