#include "tsogame/game.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace tsogame {

NodeId Game::Builder::add_node(Player owner, bool final) {
  owners_.push_back(owner);
  finals_.push_back(final ? 1 : 0);
  return static_cast<NodeId>(owners_.size() - 1);
}

void Game::Builder::add_edge(NodeId from, NodeId to) {
  edges_.emplace_back(from, to);
}

Game Game::Builder::build() && {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::vector<std::uint32_t> offsets(owners_.size() + 1, 0);
  std::vector<NodeId> targets;
  targets.reserve(edges_.size());
  for (const auto& [from, to] : edges_) {
    if (from >= owners_.size() || to >= owners_.size()) throw GameError("edge references unknown node");
    ++offsets[from + 1];
    targets.push_back(to);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return Game(std::move(owners_), std::move(finals_), std::move(offsets), std::move(targets));
}

Game::Game(std::vector<Player> owners, std::vector<std::uint8_t> finals,
           std::vector<std::uint32_t> offsets, std::vector<NodeId> targets)
    : owners_(std::move(owners)),
      finals_(std::move(finals)),
      offsets_(std::move(offsets)),
      targets_(std::move(targets)) {
  if (finals_.size() != owners_.size() || offsets_.size() != owners_.size() + 1 ||
      offsets_.back() != targets_.size())
    throw GameError("inconsistent game arrays");
  for (std::size_t n = 0; n < owners_.size(); ++n) {
    if (offsets_[n] > offsets_[n + 1]) throw GameError("edge offsets not monotone");
    for (std::uint32_t e = offsets_[n]; e < offsets_[n + 1]; ++e) {
      if (targets_[e] >= owners_.size()) throw GameError("edge references unknown node");
      if (e > offsets_[n] && targets_[e - 1] >= targets_[e])
        throw GameError("successor lists must be sorted and duplicate-free");
    }
  }
}

bool Game::has_edge(NodeId from, NodeId to) const {
  auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

void Game::check() const {
  for (NodeId n = 0; n < size(); ++n) {
    if (is_final(n) && owner(n) != Player::A)
      throw GameError("final node " + std::to_string(n) + " is not owned by A");
    if (successors(n).empty()) throw GameError("node " + std::to_string(n) + " is deadlocked");
  }
}

std::vector<NodeId> Solution::region(Player p) const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < winner.size(); ++n)
    if (winner[n] == p) out.push_back(n);
  return out;
}

Solution solve(const Game& g) {
  g.check();
  const std::size_t n = g.size();

  std::vector<std::uint32_t> pred_offsets(n + 1, 0);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.successors(u)) ++pred_offsets[v + 1];
  std::partial_sum(pred_offsets.begin(), pred_offsets.end(), pred_offsets.begin());
  std::vector<NodeId> preds(g.num_edges());
  {
    std::vector<std::uint32_t> fill(pred_offsets.begin(), pred_offsets.end() - 1);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v : g.successors(u)) preds[fill[v]++] = u;
  }

  std::vector<std::uint32_t> count(n);
  std::vector<std::uint32_t> rank(n, kNoNode);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    count[u] = static_cast<std::uint32_t>(g.successors(u).size());
    if (g.is_final(u)) {
      rank[u] = 0;
      queue.push_back(u);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId v = queue[head];
    for (std::uint32_t e = pred_offsets[v]; e < pred_offsets[v + 1]; ++e) {
      NodeId u = preds[e];
      if (rank[u] != kNoNode) continue;
      if (g.owner(u) == Player::B || --count[u] == 0) {
        rank[u] = rank[v] + 1;
        queue.push_back(u);
      }
    }
  }

  Solution s;
  s.winner.resize(n);
  s.strategy_a = {Player::A, std::vector<NodeId>(n, kNoNode)};
  s.strategy_b = {Player::B, std::vector<NodeId>(n, kNoNode)};
  for (NodeId u = 0; u < n; ++u) {
    const bool b_wins = rank[u] != kNoNode;
    s.winner[u] = b_wins ? Player::B : Player::A;
    if (b_wins && g.owner(u) == Player::B) {
      for (NodeId v : g.successors(u)) {
        if (rank[v] < rank[u]) {
          s.strategy_b.choice[u] = v;
          break;
        }
      }
    } else if (!b_wins && g.owner(u) == Player::A) {
      for (NodeId v : g.successors(u)) {
        if (rank[v] == kNoNode) {
          s.strategy_a.choice[u] = v;
          break;
        }
      }
    } else if (g.owner(u) == Player::A) {
      // Losing A postpones the final for as long as possible.
      NodeId best = kNoNode;
      for (NodeId v : g.successors(u))
        if (best == kNoNode || rank[v] > rank[best]) best = v;
      s.strategy_a.choice[u] = best;
    } else if (!g.successors(u).empty()) {
      s.strategy_b.choice[u] = g.successors(u).front();
    }
  }
  s.rank = std::move(rank);
  return s;
}

Play play(const Game& g, const Strategy& a, const Strategy& b, NodeId start, std::size_t horizon) {
  if (start >= g.size()) throw GameError("play starts at unknown node");
  Play result;
  result.prefix.push_back(start);
  NodeId cur = start;
  if (g.is_final(cur)) {
    result.outcome = Play::Outcome::BReachedFinal;
    return result;
  }
  for (std::size_t step = 0; step < horizon; ++step) {
    const Strategy& s = g.owner(cur) == Player::A ? a : b;
    if (!s.defined(cur))
      throw StrategyError("strategy of player " + std::string(to_string(g.owner(cur))) +
                              " is undefined at node " + std::to_string(cur),
                          cur);
    NodeId next = s.at(cur);
    if (!g.has_edge(cur, next))
      throw StrategyError("strategy picks a non-successor at node " + std::to_string(cur), cur);
    result.prefix.push_back(next);
    cur = next;
    if (g.is_final(cur)) {
      result.outcome = Play::Outcome::BReachedFinal;
      return result;
    }
  }
  result.outcome = Play::Outcome::ASurvived;
  return result;
}

BisimResult check_bisimulation(const Game& g, const Game& h, std::span<const NodePair> rel,
                               std::span<const NodePair> checked) {
  auto key = [](NodeId a, NodeId b) { return (std::uint64_t{a} << 32) | b; };
  std::unordered_set<std::uint64_t> pairs;
  pairs.reserve(rel.size() * 2);
  for (const auto& [a, b] : rel) {
    if (a >= g.size() || b >= h.size()) throw GameError("relation references unknown node");
    pairs.insert(key(a, b));
  }
  if (checked.empty()) checked = rel;

  BisimResult result;
  auto fail = [&](NodePair p, BisimFailure::Reason r, NodePair edge) {
    result.ok = false;
    result.failure = BisimFailure{p, r, edge};
    return result;
  };
  for (const auto& pr : checked) {
    const auto [a, b] = pr;
    if (g.owner(a) != h.owner(b)) return fail(pr, BisimFailure::Reason::Owner, {kNoNode, kNoNode});
    if (g.is_final(a) != h.is_final(b))
      return fail(pr, BisimFailure::Reason::Final, {kNoNode, kNoNode});
    for (NodeId a2 : g.successors(a)) {
      auto hs = h.successors(b);
      bool matched = std::any_of(hs.begin(), hs.end(),
                                 [&](NodeId b2) { return pairs.count(key(a2, b2)) != 0; });
      if (!matched) return fail(pr, BisimFailure::Reason::Zig, {a, a2});
    }
    for (NodeId b2 : h.successors(b)) {
      auto gs = g.successors(a);
      bool matched = std::any_of(gs.begin(), gs.end(),
                                 [&](NodeId a2) { return pairs.count(key(a2, b2)) != 0; });
      if (!matched) return fail(pr, BisimFailure::Reason::Zag, {b, b2});
    }
  }
  return result;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const Game& g, std::span<const std::string> labels,
                       std::span<const std::string> edge_labels) {
  if (labels.size() != g.size()) throw GameError("one label per node required");
  if (!edge_labels.empty() && edge_labels.size() != g.num_edges())
    throw GameError("one label per edge required");
  std::vector<NodeId> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return labels[a] < labels[b]; });
  std::vector<std::uint32_t> pos(g.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  std::ostringstream out;
  out << "digraph game {\n";
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    NodeId n = order[i];
    const char* shape = g.is_final(n) ? "doublecircle" : (g.owner(n) == Player::A ? "ellipse" : "box");
    out << "  n" << i << " [label=\"" << dot_escape(labels[n]) << "\", shape=" << shape << "];\n";
  }
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    std::size_t index;
  };
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  std::size_t index = 0;
  for (NodeId u = 0; u < g.size(); ++u)
    for (NodeId v : g.successors(u)) edges.push_back({pos[u], pos[v], index++});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.from, x.to) < std::tie(y.from, y.to);
  });
  for (const auto& e : edges) {
    out << "  n" << e.from << " -> n" << e.to;
    if (!edge_labels.empty()) out << " [label=\"" << dot_escape(edge_labels[e.index]) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tsogame
