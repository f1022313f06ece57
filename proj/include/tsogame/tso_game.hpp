#ifndef TSOGAME_TSO_GAME_HPP
#define TSOGAME_TSO_GAME_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tsogame/explore.hpp"
#include "tsogame/tso.hpp"

namespace tsogame {

enum class UpdateRight : std::uint8_t { Never, Before, After, Always };

std::string_view to_string(UpdateRight r) noexcept;
UpdateRight parse_update_right(std::string_view s);

struct UpdatePolicy {
  UpdateRight a = UpdateRight::Never;
  UpdateRight b = UpdateRight::Never;

  UpdateRight of(Player p) const noexcept { return p == Player::A ? a : b; }
  bool before(Player p) const noexcept {
    return of(p) == UpdateRight::Before || of(p) == UpdateRight::Always;
  }
  bool after(Player p) const noexcept {
    return of(p) == UpdateRight::After || of(p) == UpdateRight::Always;
  }

  // "A=always,B=never"
  static UpdatePolicy parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const UpdatePolicy&, const UpdatePolicy&) = default;
};

inline constexpr UpdateRight kAllRights[] = {UpdateRight::Always, UpdateRight::Before,
                                             UpdateRight::After, UpdateRight::Never};

enum class Group : std::uint8_t { I, II, III, IV };

std::string_view to_string(Group g) noexcept;
Group classify(UpdatePolicy policy) noexcept;

struct TsoStart {
  TsoConfig config;
  Player turn = Player::A;
};

TsoStart initial_tso_start(const ProgramSpec& spec);

using TsoGame = ProgramGame<TsoConfig>;
using ViewGame = ProgramGame<View>;

// Edges compose update closures around each instruction according to the
// mover's rights; writes are disabled once the writer's buffer is full.
TsoGame build_tso_game_bounded(const Program& p, const FinalSet& finals, UpdatePolicy policy,
                               const TsoStart& c0, std::size_t capacity,
                               const ExploreOptions& opts = {});

// Game over views; only meaningful when nobody may update.
ViewGame build_view_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const ExploreOptions& opts = {});

struct SolveOptions {
  ExploreOptions explore;
  // Opt-in bounded analysis for undecidable cells.
  std::optional<std::size_t> bounded_capacity;
};

struct BoundedReport {
  std::size_t capacity = 0;
  Player winner = Player::A;
  std::size_t configs = 0;
  std::size_t edges = 0;
  static constexpr std::string_view kCaveat =
      "bounded-capacity result: not sound in either direction for the unbounded game";
};

struct SolveStats {
  std::size_t configs = 0;
  std::size_t edges = 0;
  double solve_ms = 0;
};

// The game actually solved for a verdict, kept for strategy export and replay.
struct SolvedGame {
  std::variant<TsoGame, ViewGame> game;
  Solution solution;

  const Game& graph() const;
  const ProgramGame<TsoConfig>* tso() const { return std::get_if<TsoGame>(&game); }
  const ProgramGame<View>* views() const { return std::get_if<ViewGame>(&game); }
};

struct GameVerdict {
  UpdatePolicy policy;
  Group group = Group::I;
  bool decidable = true;
  std::optional<Player> winner;
  std::optional<BoundedReport> bounded;
  SolveStats stats;
  std::shared_ptr<const SolvedGame> solved;
};

// The finite game G': Y-configurations with at most one buffered message
// (plus the start), and every successor of those.
TsoGame build_group1_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                          UpdatePolicy policy, const ExploreOptions& opts = {});
// Configurations with at most max(1, |B(c0)|) buffered messages.
TsoGame build_group2_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                          const ExploreOptions& opts = {});

// Players in the X (updates after) and Y (updates before) roles of the group I game.
struct GroupOneRoles {
  Player x = Player::A;
  Player y = Player::B;
};
GroupOneRoles group1_roles(UpdatePolicy policy);

std::size_t group2_bound(const TsoConfig& c0) noexcept;

GameVerdict solve_group1(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         UpdatePolicy policy, const SolveOptions& opts = {});
GameVerdict solve_group2(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const SolveOptions& opts = {});
GameVerdict solve_group4(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const SolveOptions& opts = {});

// Dispatches on classify(policy); group III yields an undecidable verdict.
GameVerdict solve(const Program& p, const FinalSet& finals, const TsoStart& c0,
                  UpdatePolicy policy, const SolveOptions& opts = {});

}  // namespace tsogame

#endif  // TSOGAME_TSO_GAME_HPP
