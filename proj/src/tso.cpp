#include "tsogame/tso.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace tsogame {

TsoConfig TsoConfig::with_empty_buffers(GlobalState states, Memory memory) {
  TsoConfig c;
  c.buffers.resize(states.size());
  c.states = std::move(states);
  c.memory = std::move(memory);
  return c;
}

std::size_t TsoConfig::total_messages() const noexcept {
  std::size_t n = 0;
  for (const auto& b : buffers) n += b.size();
  return n;
}

bool TsoConfig::buffers_empty() const noexcept {
  return std::all_of(buffers.begin(), buffers.end(), [](const Buffer& b) { return b.empty(); });
}

TsoConfig initial_tso_config(const ProgramSpec& spec) {
  return TsoConfig::with_empty_buffers(initial_states(spec.program), spec.memory);
}

namespace {

// Value process `proc` reads for x: its newest buffered x-write, else memory.
ValueId visible_value(const TsoConfig& c, ProcId proc, VarId x) {
  const Buffer& b = c.buffers[proc];
  for (auto it = b.rbegin(); it != b.rend(); ++it)
    if (it->var == x) return it->value;
  return c.memory[x];
}

}  // namespace

std::vector<std::pair<TsoStep, TsoConfig>> instruction_successors(const Program& p,
                                                                  const TsoConfig& c,
                                                                  std::size_t capacity) {
  std::vector<std::pair<TsoStep, TsoConfig>> out;
  for (ProcId i = 0; i < p.processes.size(); ++i) {
    const Process& proc = p.processes[i];
    const bool empty = c.buffers[i].empty();
    for (std::uint32_t t : p.outgoing(i, c.states[i])) {
      const Transition& tr = proc.transitions[t];
      const Instruction& in = tr.instr;
      switch (in.op) {
        case Op::Read:
          if (visible_value(c, i, in.var) != in.value) continue;
          break;
        case Op::Write:
          if (c.buffers[i].size() >= capacity) continue;
          break;
        case Op::Arw:
          if (!empty || c.memory[in.var] != in.value) continue;
          break;
        case Op::Fence:
          if (!empty) continue;
          break;
        case Op::Skip:
          break;
      }
      TsoConfig next = c;
      next.states[i] = tr.to;
      if (in.op == Op::Write) next.buffers[i].push_back({in.var, in.value});
      if (in.op == Op::Arw) next.memory[in.var] = in.new_value;
      out.emplace_back(TsoStep{TsoStep::Kind::Instruction, i, t}, std::move(next));
    }
  }
  return out;
}

TsoConfig apply_update(const TsoConfig& c, ProcId proc) {
  TsoConfig next = c;
  Buffer& b = next.buffers[proc];
  next.memory[b.front().var] = b.front().value;
  b.erase(b.begin());
  return next;
}

std::vector<std::pair<TsoStep, TsoConfig>> tso_successors(const Program& p, const TsoConfig& c,
                                                          std::size_t capacity) {
  auto out = instruction_successors(p, c, capacity);
  for (ProcId i = 0; i < c.buffers.size(); ++i)
    if (!c.buffers[i].empty()) out.emplace_back(TsoStep::update(i), apply_update(c, i));
  return out;
}

std::vector<UpdatedConfig> up_star(const TsoConfig& c) {
  std::vector<UpdatedConfig> out{{c, {}}};
  if (c.buffers_empty()) return out;
  std::unordered_set<TsoConfig> seen{c};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (ProcId i = 0; i < out[head].config.buffers.size(); ++i) {
      if (out[head].config.buffers[i].empty()) continue;
      TsoConfig next = apply_update(out[head].config, i);
      if (!seen.insert(next).second) continue;
      auto updates = out[head].updates;
      updates.push_back(i);
      out.push_back({std::move(next), std::move(updates)});
    }
  }
  return out;
}

std::vector<UpdatedConfig> flush_all(const TsoConfig& c) {
  auto all = up_star(c);
  std::vector<UpdatedConfig> out;
  for (auto& u : all)
    if (u.config.buffers_empty()) out.push_back(std::move(u));
  return out;
}

TsoReachability tso_reachable_bounded(const Program& p, const TsoConfig& c0,
                                      const StateTarget& target, std::size_t capacity) {
  for (const auto& b : c0.buffers)
    if (b.size() > capacity) throw ProgramError("initial buffer exceeds capacity");
  TsoReachability result;
  std::vector<TsoConfig> seen{c0};
  std::vector<std::pair<std::size_t, TsoStep>> parent{{0, {}}};
  std::unordered_map<TsoConfig, std::size_t> index{{c0, 0}};
  for (std::size_t head = 0; head < seen.size(); ++head) {
    if (target.matches(seen[head].states)) {
      result.reachable = true;
      for (std::size_t at = head; at != 0; at = parent[at].first)
        result.witness.push_back(parent[at].second);
      std::reverse(result.witness.begin(), result.witness.end());
      break;
    }
    for (auto& [step, next] : tso_successors(p, seen[head], capacity)) {
      if (!index.try_emplace(next, seen.size()).second) continue;
      seen.push_back(std::move(next));
      parent.emplace_back(head, step);
    }
  }
  result.explored = seen.size();
  return result;
}

View view_of(const TsoConfig& c) {
  View v;
  v.states = c.states;
  v.num_vars = c.memory.size();
  const std::size_t n = c.states.size();
  v.values.resize(n * v.num_vars);
  v.buffered.assign(n * v.num_vars, 0);
  v.fencable.resize(n);
  for (ProcId i = 0; i < n; ++i) {
    v.fencable[i] = c.buffers[i].empty() ? 1 : 0;
    for (VarId x = 0; x < v.num_vars; ++x) v.values[i * v.num_vars + x] = c.memory[x];
    for (const auto& e : c.buffers[i]) {
      v.values[i * v.num_vars + e.var] = e.value;
      v.buffered[i * v.num_vars + e.var] = 1;
    }
  }
  return v;
}

std::vector<std::pair<StepLabel, View>> view_successors(const Program& p, const View& v) {
  std::vector<std::pair<StepLabel, View>> out;
  const std::size_t nv = v.num_vars;
  for (ProcId i = 0; i < p.processes.size(); ++i) {
    const Process& proc = p.processes[i];
    for (std::uint32_t t : p.outgoing(i, v.states[i])) {
      const Transition& tr = proc.transitions[t];
      const Instruction& in = tr.instr;
      switch (in.op) {
        case Op::Read:
          if (v.value(i, in.var) != in.value) continue;
          break;
        case Op::Arw:
          if (!v.fencable[i] || v.value(i, in.var) != in.value) continue;
          break;
        case Op::Fence:
          if (!v.fencable[i]) continue;
          break;
        case Op::Write:
        case Op::Skip:
          break;
      }
      View next = v;
      next.states[i] = tr.to;
      if (in.op == Op::Write) {
        next.values[i * nv + in.var] = in.value;
        next.buffered[i * nv + in.var] = 1;
        next.fencable[i] = 0;
      } else if (in.op == Op::Arw) {
        // Memory changes, so every process without a pending x-write sees it.
        for (ProcId k = 0; k < v.states.size(); ++k)
          if (!v.is_buffered(k, in.var)) next.values[k * nv + in.var] = in.new_value;
      }
      out.emplace_back(StepLabel{i, t}, std::move(next));
    }
  }
  return out;
}

}  // namespace tsogame
