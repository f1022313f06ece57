// Seeded random instances for property tests.
#ifndef TSOGAME_TESTS_GENERATORS_HPP
#define TSOGAME_TESTS_GENERATORS_HPP

#include <cstdint>
#include <random>

#include "tsogame/reductions.hpp"
#include "tsogame/sc_game.hpp"

namespace gen {

using Rng = std::mt19937_64;

struct ProgramShape {
  std::size_t max_procs = 3;
  std::size_t max_states = 4;
  std::size_t max_vars = 2;
  std::size_t domain = 2;
  std::size_t max_out = 2;  // transitions per state
  bool allow_arw = true;
  bool allow_fence = true;
  bool acyclic = false;  // transitions only go to higher-numbered states
};

// Processes P1.., states q0.., variables x, y, z.., values 0, 1, ...
// Finals are 1-2 random local states; memory is random; A moves first.
tsogame::ProgramSpec random_program(Rng& rng, const ProgramShape& shape);

struct AtmShape {
  std::size_t max_states = 4;     // including the accepting state
  std::size_t max_letters = 3;    // including the blank
  int max_space = 3;
  std::size_t max_rules = 6;
};

tsogame::Atm random_atm(Rng& rng, const AtmShape& shape);
tsogame::AtmWord random_word(Rng& rng, const tsogame::Atm& atm);

struct PcsShape {
  std::size_t max_states = 5;
  std::size_t max_messages = 2;
  std::size_t max_rules = 6;
};

tsogame::Pcs random_pcs(Rng& rng, const PcsShape& shape);

// Uniform integer in [lo, hi].
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi);

}  // namespace gen

#endif
