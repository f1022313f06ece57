#include "tsogame/sc_game.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace tsogame {

ScGame build_sc_game(const Program& p, const FinalSet& finals, const ScConfig& c0, Player turn,
                     const ExploreOptions& opts) {
  FinalMask mask(p, finals);
  auto successors = [&](const ScConfig& c, Player, auto&& emit) {
    for (auto& [label, next] : sc_successors(p, c))
      emit(std::move(next), MoveWitness{{}, label.proc, label.transition, {}});
  };
  auto is_final = [&](const ScConfig& c) { return mask.any(c.states); };
  return explore_game(c0, turn, successors, is_final, opts);
}

namespace {

bool plain_name(const std::string& s) {
  if (s.empty() || s.find("__") != std::string::npos) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
  });
}

}  // namespace

void Atm::validate() const {
  if (alphabet.empty()) throw ProgramError("ATM alphabet is empty");
  if (states.empty()) throw ProgramError("ATM has no states");
  if (existential.size() != states.size()) throw ProgramError("ATM quantifier list has wrong size");
  if (blank >= alphabet.size()) throw ProgramError("ATM blank is not a letter");
  if (initial >= states.size() || accepting >= states.size())
    throw ProgramError("ATM initial/accepting state out of range");
  if (existential[accepting]) throw ProgramError("ATM accepting state must be universal");
  if (space_bound < 1) throw ProgramError("ATM space bound must be positive");
  for (const auto& names : {alphabet, states}) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!plain_name(n)) throw ProgramError("ATM name '" + n + "' must be a word without '__'");
      if (!seen.insert(n).second) throw ProgramError("duplicate ATM name '" + n + "'");
    }
  }
  for (const Rule& r : rules) {
    if (r.from >= states.size() || r.to >= states.size() || r.read >= alphabet.size() ||
        r.write >= alphabet.size())
      throw ProgramError("ATM rule out of range");
    if (r.from == accepting) throw ProgramError("ATM accepting state has an outgoing rule");
  }
}

namespace {

void check_word(const Atm& atm, const AtmWord& word) {
  if (word.size() > static_cast<std::size_t>(atm.space_bound))
    throw ProgramError("word longer than the space bound");
  for (auto l : word)
    if (l >= atm.alphabet.size()) throw ProgramError("word letter out of range");
}

}  // namespace

bool atm_accepts(const Atm& atm, const AtmWord& word) {
  atm.validate();
  check_word(atm, word);
  const int p = atm.space_bound;
  const std::size_t cells = 2 * static_cast<std::size_t>(p) + 1;
  double space = static_cast<double>(atm.states.size()) * static_cast<double>(cells);
  for (std::size_t i = 0; i < cells; ++i) space *= static_cast<double>(atm.alphabet.size());
  if (space > static_cast<double>(kAtmSpaceLimit))
    throw SizeLimitError("ATM configuration space too large");

  struct Config {
    std::uint32_t state;
    int head;  // -p..p
    std::vector<std::uint32_t> tape;
    bool operator<(const Config& o) const {
      return std::tie(state, head, tape) < std::tie(o.state, o.head, o.tape);
    }
  };
  Config c0{atm.initial, 1, std::vector<std::uint32_t>(cells, atm.blank)};
  for (std::size_t j = 0; j < word.size(); ++j) c0.tape[p + 1 + j] = word[j];

  // Enumerate the reachable configurations; kOff marks a move off the tape.
  constexpr std::size_t kOff = static_cast<std::size_t>(-1);
  std::vector<Config> configs{c0};
  std::map<Config, std::size_t> index{{c0, 0}};
  std::vector<std::vector<std::size_t>> succ;
  for (std::size_t head = 0; head < configs.size(); ++head) {
    std::vector<std::size_t> out;
    const Config c = configs[head];
    for (const auto& r : atm.rules) {
      if (r.from != c.state || r.read != c.tape[c.head + p]) continue;
      int next_head = c.head + static_cast<int>(r.move);
      if (next_head < -p || next_head > p) {
        out.push_back(kOff);
        continue;
      }
      Config n{r.to, next_head, c.tape};
      n.tape[c.head + p] = r.write;
      auto [it, fresh] = index.emplace(n, configs.size());
      if (fresh) configs.push_back(n);
      out.push_back(it->second);
    }
    succ.push_back(std::move(out));
  }

  std::vector<bool> accepted(configs.size(), false);
  for (std::size_t i = 0; i < configs.size(); ++i) accepted[i] = configs[i].state == atm.accepting;
  auto in_set = [&](std::size_t s) { return s != kOff && accepted[s]; };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (accepted[i]) continue;
      const auto& out = succ[i];
      bool ok = atm.existential[configs[i].state] ? std::any_of(out.begin(), out.end(), in_set)
                                                  : std::all_of(out.begin(), out.end(), in_set);
      if (ok) {
        accepted[i] = true;
        changed = true;
      }
    }
  }
  return accepted[0];
}

std::string atm_cell_name(int position) {
  return "cell_" + (position < 0 ? "m" + std::to_string(-position) : std::to_string(position));
}

ProgramSpec atm_to_program(const Atm& atm, const AtmWord& word) {
  atm.validate();
  check_word(atm, word);
  const int p = atm.space_bound;

  ProgramSpec spec;
  Program& prog = spec.program;
  prog.domain = atm.alphabet;
  for (int i = -p; i <= p; ++i) prog.vars.push_back(atm_cell_name(i));
  auto var = [&](int i) { return static_cast<VarId>(i + p); };

  Process proc;
  proc.name = "M";
  std::unordered_map<std::string, StateId> ids;
  auto state = [&](const std::string& name) {
    auto [it, fresh] = ids.emplace(name, static_cast<StateId>(proc.states.size()));
    if (fresh) proc.states.push_back(name);
    return it->second;
  };
  std::set<std::tuple<StateId, StateId, Op, VarId, ValueId>> seen;
  auto edge = [&](StateId from, Instruction in, StateId to) {
    if (seen.emplace(from, to, in.op, in.var, in.value).second) proc.transitions.push_back({from, in, to});
  };
  auto pos = [](int i) { return i < 0 ? "m" + std::to_string(-i) : std::to_string(i); };
  auto dir = [](Atm::Move m) { return m == Atm::Move::Left ? "L" : "R"; };
  auto head_state = [&](std::uint32_t q, int i) { return state(atm.states[q] + "__" + pos(i)); };

  // Position states first so that the initial state comes out early.
  for (std::uint32_t q = 0; q < atm.states.size(); ++q)
    for (int i = -p; i <= p; ++i) head_state(q, i);

  for (std::uint32_t q = 0; q < atm.states.size(); ++q) {
    const std::string& qn = atm.states[q];
    for (int i = -p; i <= p; ++i) {
      for (std::uint32_t b = 0; b < atm.alphabet.size(); ++b) {
        const std::string base = qn + "__" + pos(i) + "__" + atm.alphabet[b];
        StateId read_b = state(base + "__B");
        edge(head_state(q, i), Instruction::read(var(i), b), read_b);
        std::optional<StateId> read_a;
        if (!atm.existential[q]) {
          read_a = state(base + "__A");
          edge(read_b, Instruction::skip(), *read_a);
        }
        for (const auto& r : atm.rules) {
          if (r.from != q || r.read != b) continue;
          const std::string chosen =
              atm.states[r.to] + "__" + pos(i) + "__" + atm.alphabet[r.write] + "__" + dir(r.move);
          StateId chosen_b = state(chosen + "__B");
          if (atm.existential[q]) {
            StateId chosen_a = state(chosen + "__A");
            edge(read_b, Instruction::skip(), chosen_a);
            edge(chosen_a, Instruction::skip(), chosen_b);
          } else {
            edge(*read_a, Instruction::skip(), chosen_b);
          }
          // Moving off the tape leaves chosen_b without a write: B is stuck there.
          int next = i + static_cast<int>(r.move);
          if (next >= -p && next <= p)
            edge(chosen_b, Instruction::write(var(i), r.write), head_state(r.to, next));
        }
      }
    }
  }
  proc.initial = head_state(atm.initial, 1);
  prog.processes.push_back(std::move(proc));
  prog.validate();

  for (int i = -p; i <= p; ++i) spec.finals.insert({0, ids.at(atm.states[atm.accepting] + "__" + pos(i))});
  spec.memory.assign(prog.vars.size(), atm.blank);
  for (std::size_t j = 0; j < word.size(); ++j) spec.memory[var(static_cast<int>(j) + 1)] = word[j];
  spec.turn = Player::A;
  return spec;
}

}  // namespace tsogame
