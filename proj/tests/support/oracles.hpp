// Reference implementations used only by tests. They share the program
// model with the library but nothing of its semantics or solver.
#ifndef TSOGAME_TESTS_ORACLES_HPP
#define TSOGAME_TESTS_ORACLES_HPP

#include <cstddef>
#include <vector>

#include "tsogame/game.hpp"
#include "tsogame/program.hpp"
#include "tsogame/tso_game.hpp"

namespace oracle {

// Winners by plain fixpoint iteration: a B node joins once some successor
// is in, an A node once all successors are (vacuously true without any).
std::vector<tsogame::Player> naive_winners(const tsogame::Game& g);

struct BoundedResult {
  tsogame::Player winner = tsogame::Player::A;
  std::size_t configs = 0;
};

// Enumerates the capacity-bounded TSO game with its own step functions and
// solves it with naive_winners; players without a move lose.
BoundedResult bounded_minimax(const tsogame::ProgramSpec& spec, tsogame::UpdatePolicy policy,
                              std::size_t capacity, std::size_t max_configs = 2'000'000);

// Same enumeration for SC semantics.
BoundedResult sc_minimax(const tsogame::ProgramSpec& spec);

}  // namespace oracle

#endif
