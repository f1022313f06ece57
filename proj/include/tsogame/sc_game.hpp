#ifndef TSOGAME_SC_GAME_HPP
#define TSOGAME_SC_GAME_HPP

#include <string>
#include <vector>

#include "tsogame/explore.hpp"
#include "tsogame/program.hpp"
#include "tsogame/sc.hpp"

namespace tsogame {

using ScGame = ProgramGame<ScConfig>;

// Both players move by executing one instruction of any process; finals are
// A-owned configurations where some process sits in a final state.
ScGame build_sc_game(const Program& p, const FinalSet& finals, const ScConfig& c0,
                     Player turn = Player::A, const ExploreOptions& opts = {});

// Alternating Turing machine with an explicit space bound. Letters and
// states are indices into `alphabet` and `states`.
struct Atm {
  enum class Move : std::int8_t { Left = -1, Right = 1 };
  struct Rule {
    std::uint32_t from = 0;
    std::uint32_t read = 0;
    std::uint32_t to = 0;
    std::uint32_t write = 0;
    Move move = Move::Right;
  };

  std::vector<std::string> alphabet;
  std::uint32_t blank = 0;
  std::vector<std::string> states;
  std::vector<bool> existential;  // per state; the rest are universal
  std::uint32_t initial = 0;
  std::uint32_t accepting = 0;
  std::vector<Rule> rules;
  int space_bound = 1;  // tape cells -space_bound..space_bound

  // Throws ProgramError on malformed machines.
  void validate() const;
};

using AtmWord = std::vector<std::uint32_t>;

// Largest bounded configuration space atm_accepts agrees to enumerate.
inline constexpr std::size_t kAtmSpaceLimit = 4'000'000;

// Fixpoint of the accepting-configuration sets over the bounded tape. A move
// leaving the tape counts as a non-accepting successor.
bool atm_accepts(const Atm& atm, const AtmWord& word);

// Single-process program whose SC game B wins from its initial A-turn
// configuration iff the machine accepts the word.
ProgramSpec atm_to_program(const Atm& atm, const AtmWord& word);

std::string atm_cell_name(int position);

}  // namespace tsogame

#endif  // TSOGAME_SC_GAME_HPP
