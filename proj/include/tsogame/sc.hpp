#ifndef TSOGAME_SC_HPP
#define TSOGAME_SC_HPP

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "tsogame/hash.hpp"
#include "tsogame/program.hpp"

namespace tsogame {

struct ScConfig {
  GlobalState states;
  Memory memory;

  friend bool operator==(const ScConfig&, const ScConfig&) = default;
};

// One executed transition of one process.
struct StepLabel {
  ProcId proc = 0;
  std::uint32_t transition = 0;  // index into processes[proc].transitions

  friend bool operator==(const StepLabel&, const StepLabel&) = default;
};

ScConfig initial_sc_config(const ProgramSpec& spec);

std::vector<std::pair<StepLabel, ScConfig>> sc_successors(const Program& p, const ScConfig& c);

// Disjunction of conjunctions of "process is in local state" atoms.
class StateTarget {
 public:
  StateTarget() = default;
  explicit StateTarget(std::vector<std::vector<LocalState>> clauses);

  // "P1.q3&P2.r3|P2.r2"
  static StateTarget parse(const Program& p, std::string_view text);
  static StateTarget any_of(const FinalSet& states);

  bool matches(std::span<const StateId> global) const;
  const std::vector<std::vector<LocalState>>& clauses() const noexcept { return clauses_; }

 private:
  std::vector<std::vector<LocalState>> clauses_;
};

struct ScReachability {
  bool reachable = false;
  std::vector<StepLabel> witness;
  std::size_t explored = 0;
};

// Breadth-first, so witnesses are shortest.
ScReachability sc_reachable(const Program& p, const ScConfig& c0, const StateTarget& target);

// Product of local state counts times |D|^|X|, saturating.
std::size_t sc_state_bound(const Program& p);

}  // namespace tsogame

template <>
struct std::hash<tsogame::ScConfig> {
  std::size_t operator()(const tsogame::ScConfig& c) const noexcept {
    std::size_t h = 0;
    tsogame::detail::hash_range(h, c.states);
    tsogame::detail::hash_range(h, c.memory);
    return h;
  }
};

#endif  // TSOGAME_SC_HPP
