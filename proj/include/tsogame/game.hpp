#ifndef TSOGAME_GAME_HPP
#define TSOGAME_GAME_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tsogame/player.hpp"

namespace tsogame {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class GameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Explicit game graph in compressed sparse row form. Successor lists are
// sorted and free of duplicates.
class Game {
 public:
  class Builder {
   public:
    NodeId add_node(Player owner, bool final);
    void add_edge(NodeId from, NodeId to);
    std::size_t size() const noexcept { return owners_.size(); }
    Game build() &&;

   private:
    std::vector<Player> owners_;
    std::vector<std::uint8_t> finals_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
  };

  Game() = default;
  // Rows must already be sorted by source; each row is sorted and deduplicated here.
  Game(std::vector<Player> owners, std::vector<std::uint8_t> finals,
       std::vector<std::uint32_t> offsets, std::vector<NodeId> targets);

  std::size_t size() const noexcept { return owners_.size(); }
  std::size_t num_edges() const noexcept { return targets_.size(); }
  Player owner(NodeId n) const { return owners_[n]; }
  bool is_final(NodeId n) const { return finals_[n] != 0; }
  std::span<const NodeId> successors(NodeId n) const {
    return {targets_.data() + offsets_[n], targets_.data() + offsets_[n + 1]};
  }
  // Position of n's first successor in the flat edge order.
  std::size_t edge_offset(NodeId n) const { return offsets_[n]; }
  bool has_edge(NodeId from, NodeId to) const;

  // Throws GameError when finals are not A-owned, an edge is dangling or a
  // node has no successor.
  void check() const;

 private:
  std::vector<Player> owners_;
  std::vector<std::uint8_t> finals_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> targets_;
};

// Positional strategy; kNoNode marks nodes where it is undefined.
struct Strategy {
  Player player = Player::A;
  std::vector<NodeId> choice;

  bool defined(NodeId n) const { return n < choice.size() && choice[n] != kNoNode; }
  NodeId at(NodeId n) const { return choice[n]; }
};

struct Solution {
  std::vector<Player> winner;
  // Attractor layer for B-winning nodes, kNoNode for A-winning ones.
  std::vector<std::uint32_t> rank;
  // Defined wherever the owner has a move; winning on the owner's region.
  Strategy strategy_a;
  Strategy strategy_b;

  bool wins(Player p, NodeId n) const { return winner[n] == p; }
  std::vector<NodeId> region(Player p) const;
};

// Counter-based backward induction, linear in nodes plus edges.
Solution solve(const Game& g);

struct Play {
  enum class Outcome : std::uint8_t { BReachedFinal, ASurvived };
  std::vector<NodeId> prefix;
  Outcome outcome = Outcome::ASurvived;
};

class StrategyError : public std::runtime_error {
 public:
  StrategyError(const std::string& what, NodeId node) : std::runtime_error(what), node_(node) {}
  NodeId node() const noexcept { return node_; }

 private:
  NodeId node_;
};

// Follows both strategies for at most `horizon` moves from `start`.
Play play(const Game& g, const Strategy& a, const Strategy& b, NodeId start, std::size_t horizon);

using NodePair = std::pair<NodeId, NodeId>;

struct BisimFailure {
  enum class Reason : std::uint8_t { Owner, Final, Zig, Zag };
  NodePair pair;
  Reason reason = Reason::Owner;
  // The edge with no matching partner: in g for Zig, in h for Zag.
  NodePair unmatched{kNoNode, kNoNode};
};

struct BisimResult {
  bool ok = true;
  std::optional<BisimFailure> failure;
};

// Checks every pair in `checked` (all of `rel` when empty) against the zig,
// zag, owner and final conditions, matching successors through `rel`.
BisimResult check_bisimulation(const Game& g, const Game& h, std::span<const NodePair> rel,
                               std::span<const NodePair> checked = {});

// Nodes are emitted in label order. Optional edge labels follow the CSR edge order.
std::string export_dot(const Game& g, std::span<const std::string> labels,
                       std::span<const std::string> edge_labels = {});

}  // namespace tsogame

#endif  // TSOGAME_GAME_HPP
