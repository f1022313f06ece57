#ifndef TSOGAME_PLAYER_HPP
#define TSOGAME_PLAYER_HPP

#include <cstdint>
#include <string_view>

namespace tsogame {

// A is the safety player, B tries to reach a final configuration.
enum class Player : std::uint8_t { A, B };

constexpr Player opponent(Player p) noexcept {
  return p == Player::A ? Player::B : Player::A;
}

constexpr std::string_view to_string(Player p) noexcept {
  return p == Player::A ? "A" : "B";
}

}  // namespace tsogame

#endif  // TSOGAME_PLAYER_HPP
