#include "beda/game_id.hpp"

#include "beda/errors.hpp"

namespace beda {

std::string_view to_string(GameId game) {
  switch (game) {
    case GameId::kCkbg:
      return "ckbg";
    case GameId::kMf:
      return "mf";
    case GameId::kCasino:
      return "casino";
  }
  return "ckbg";
}

GameId game_from_string(std::string_view name) {
  if (name == "ckbg") return GameId::kCkbg;
  if (name == "mf") return GameId::kMf;
  if (name == "casino") return GameId::kCasino;
  throw DomainError("unknown game '" + std::string(name) + "'");
}

}  // namespace beda
