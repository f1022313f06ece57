#include "tsogame/sc.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace tsogame {

ScConfig initial_sc_config(const ProgramSpec& spec) {
  return {initial_states(spec.program), spec.memory};
}

std::vector<std::pair<StepLabel, ScConfig>> sc_successors(const Program& p, const ScConfig& c) {
  std::vector<std::pair<StepLabel, ScConfig>> out;
  for (ProcId i = 0; i < p.processes.size(); ++i) {
    const Process& proc = p.processes[i];
    for (std::uint32_t t : p.outgoing(i, c.states[i])) {
      const Transition& tr = proc.transitions[t];
      const Instruction& in = tr.instr;
      ScConfig next = c;
      next.states[i] = tr.to;
      switch (in.op) {
        case Op::Read:
          if (c.memory[in.var] != in.value) continue;
          break;
        case Op::Write:
          next.memory[in.var] = in.value;
          break;
        case Op::Arw:
          if (c.memory[in.var] != in.value) continue;
          next.memory[in.var] = in.new_value;
          break;
        case Op::Skip:
        case Op::Fence:
          break;
      }
      out.emplace_back(StepLabel{i, t}, std::move(next));
    }
  }
  return out;
}

StateTarget::StateTarget(std::vector<std::vector<LocalState>> clauses)
    : clauses_(std::move(clauses)) {}

StateTarget StateTarget::parse(const Program& p, std::string_view text) {
  std::vector<std::vector<LocalState>> clauses;
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    std::string_view clause =
        text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    std::vector<LocalState> atoms;
    std::size_t a = 0;
    while (a <= clause.size()) {
      std::size_t amp = clause.find('&', a);
      auto atom = trim(clause.substr(a, amp == std::string_view::npos ? std::string_view::npos : amp - a));
      if (atom.empty()) throw ProgramError("empty atom in target '" + std::string(text) + "'");
      atoms.push_back(parse_local_state(p, atom));
      if (amp == std::string_view::npos) break;
      a = amp + 1;
    }
    clauses.push_back(std::move(atoms));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return StateTarget(std::move(clauses));
}

StateTarget StateTarget::any_of(const FinalSet& states) {
  std::vector<std::vector<LocalState>> clauses;
  for (const auto& s : states) clauses.push_back({s});
  return StateTarget(std::move(clauses));
}

bool StateTarget::matches(std::span<const StateId> global) const {
  for (const auto& clause : clauses_) {
    bool all = true;
    for (const auto& atom : clause) {
      if (global[atom.proc] != atom.state) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

std::size_t sc_state_bound(const Program& p) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t bound = 1;
  auto mul = [&](std::size_t f) {
    if (f != 0 && bound > kMax / f) {
      bound = kMax;
    } else {
      bound *= f;
    }
  };
  for (const auto& proc : p.processes) mul(proc.states.size());
  for (std::size_t x = 0; x < p.vars.size(); ++x) mul(p.domain.size());
  return bound;
}

ScReachability sc_reachable(const Program& p, const ScConfig& c0, const StateTarget& target) {
  ScReachability result;
  std::vector<ScConfig> seen{c0};
  std::vector<std::pair<std::size_t, StepLabel>> parent{{0, {}}};
  std::unordered_map<ScConfig, std::size_t> index{{c0, 0}};
  const std::size_t bound = sc_state_bound(p);

  auto finish = [&](std::size_t at) {
    result.reachable = true;
    while (at != 0) {
      result.witness.push_back(parent[at].second);
      at = parent[at].first;
    }
    std::reverse(result.witness.begin(), result.witness.end());
  };

  for (std::size_t head = 0; head < seen.size(); ++head) {
    if (target.matches(seen[head].states)) {
      result.explored = seen.size();
      finish(head);
      return result;
    }
    for (auto& [label, next] : sc_successors(p, seen[head])) {
      auto [it, fresh] = index.try_emplace(next, seen.size());
      if (!fresh) continue;
      seen.push_back(std::move(next));
      parent.emplace_back(head, label);
    }
    if (seen.size() > bound) throw std::logic_error("SC exploration exceeded the state-count bound");
  }
  result.explored = seen.size();
  return result;
}

}  // namespace tsogame
