#ifndef TSOGAME_EXPLORE_HPP
#define TSOGAME_EXPLORE_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tsogame/game.hpp"
#include "tsogame/program.hpp"

namespace tsogame {

// How one game edge came about: updates committed before the move, the
// executed transition, and updates committed after it.
struct MoveWitness {
  std::vector<ProcId> pre;
  ProcId proc = kNoProc;  // kNoProc marks a sink edge
  std::uint32_t transition = 0;
  std::vector<ProcId> post;

  std::size_t updates() const noexcept { return pre.size() + post.size(); }
  bool is_sink() const noexcept { return proc == kNoProc; }
};

enum class DeadlockPolicy : std::uint8_t { DeadlockedPlayerLoses, Reject };

class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeadlockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExploreOptions {
  DeadlockPolicy deadlock = DeadlockPolicy::DeadlockedPlayerLoses;
  std::size_t max_nodes = 20'000'000;
  // Nodes at this BFS depth are left unexpanded (no edges, no sink).
  std::optional<std::size_t> max_depth;
  bool record_witnesses = false;
};

enum class NodeKind : std::uint8_t { Config, SinkAWins, SinkBWins };

// A game whose nodes are owner-annotated configurations, numbered in BFS
// discovery order from the start node (node 0).
template <class Config>
struct ProgramGame {
  Game game;
  std::vector<Config> configs;  // default-constructed for sinks
  std::vector<NodeKind> kinds;
  std::vector<std::uint32_t> depth;
  std::vector<std::uint8_t> expanded;
  std::vector<MoveWitness> witnesses;  // CSR edge order, when recorded
  std::size_t deadlocks = 0;

  NodeId initial() const noexcept { return 0; }
  bool is_sink(NodeId n) const { return kinds[n] != NodeKind::Config; }

  // Node of (config, owner), if explored.
  std::optional<NodeId> find(const Config& c, Player owner) const {
    const auto& map = owner == Player::A ? index_a : index_b;
    auto it = map.find(c);
    if (it == map.end()) return std::nullopt;
    return it->second;
  }

  std::unordered_map<Config, NodeId> index_a;
  std::unordered_map<Config, NodeId> index_b;
};

// Explores the game from (start, turn). `successors(config, mover, emit)`
// must call emit(Config, MoveWitness) for every move of `mover`; targets are
// owned by the opponent. `is_final(config)` is consulted for A-owned nodes.
template <class Config, class Successors, class IsFinal>
ProgramGame<Config> explore_game(const Config& start, Player turn, Successors&& successors,
                                 IsFinal&& is_final, const ExploreOptions& opts) {
  ProgramGame<Config> out;
  std::vector<Player> owners;
  std::vector<std::uint8_t> finals;
  std::vector<std::uint32_t> offsets{0};
  std::vector<NodeId> targets;
  NodeId sink_a = kNoNode;
  NodeId sink_b = kNoNode;

  auto add_node = [&](Config c, Player owner, NodeKind kind, std::uint32_t depth, bool final) {
    if (owners.size() >= opts.max_nodes)
      throw SizeLimitError("game exceeds " + std::to_string(opts.max_nodes) + " nodes");
    NodeId id = static_cast<NodeId>(owners.size());
    owners.push_back(owner);
    finals.push_back(final ? 1 : 0);
    out.configs.push_back(std::move(c));
    out.kinds.push_back(kind);
    out.depth.push_back(depth);
    return id;
  };
  auto intern = [&](Config c, Player owner, std::uint32_t depth) {
    auto& map = owner == Player::A ? out.index_a : out.index_b;
    auto it = map.find(c);
    if (it != map.end()) return it->second;
    bool final = owner == Player::A && is_final(c);
    NodeId id = add_node(c, owner, NodeKind::Config, depth, final);
    map.emplace(std::move(c), id);
    return id;
  };

  intern(start, turn, 0);

  struct Pending {
    NodeId target;
    std::size_t seq;
    MoveWitness witness;
  };
  std::vector<Pending> row;
  for (NodeId u = 0; u < owners.size(); ++u) {
    row.clear();
    const NodeKind kind = out.kinds[u];
    const bool expand = kind != NodeKind::Config || !opts.max_depth || out.depth[u] < *opts.max_depth;
    out.expanded.push_back(expand ? 1 : 0);
    if (kind != NodeKind::Config) {
      row.push_back({u, 0, {}});
    } else if (expand) {
      const Player mover = owners[u];
      const std::uint32_t next_depth = out.depth[u] + 1;
      // Copy: interning may reallocate out.configs.
      const Config here = out.configs[u];
      std::size_t seq = 0;
      successors(here, mover, [&](Config next, MoveWitness w) {
        NodeId v = intern(std::move(next), opponent(mover), next_depth);
        if (opts.record_witnesses) {
          row.push_back({v, seq++, std::move(w)});
        } else {
          row.push_back({v, seq++, {}});
        }
      });
      if (row.empty()) {
        ++out.deadlocks;
        if (opts.deadlock == DeadlockPolicy::Reject)
          throw DeadlockError("player " + std::string(to_string(mover)) +
                              " has no move at node " + std::to_string(u));
        NodeId& sink = mover == Player::A ? sink_b : sink_a;
        if (sink == kNoNode) {
          sink = mover == Player::A
                     ? add_node(Config{}, Player::A, NodeKind::SinkBWins, next_depth, true)
                     : add_node(Config{}, Player::B, NodeKind::SinkAWins, next_depth, false);
        }
        row.push_back({sink, 0, {}});
      }
    }
    std::sort(row.begin(), row.end(), [](const Pending& x, const Pending& y) {
      if (x.target != y.target) return x.target < y.target;
      if (x.witness.updates() != y.witness.updates()) return x.witness.updates() < y.witness.updates();
      return x.seq < y.seq;
    });
    NodeId last = kNoNode;
    for (auto& p : row) {
      if (p.target == last) continue;
      last = p.target;
      targets.push_back(p.target);
      if (opts.record_witnesses) out.witnesses.push_back(std::move(p.witness));
    }
    offsets.push_back(static_cast<std::uint32_t>(targets.size()));
  }
  out.game = Game(std::move(owners), std::move(finals), std::move(offsets), std::move(targets));
  return out;
}

}  // namespace tsogame

#endif  // TSOGAME_EXPLORE_HPP
