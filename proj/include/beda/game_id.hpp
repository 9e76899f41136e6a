#pragma once

#include <string>
#include <string_view>

namespace beda {

enum class GameId { kCkbg, kMf, kCasino };

std::string_view to_string(GameId game);
GameId game_from_string(std::string_view name);

}  // namespace beda
