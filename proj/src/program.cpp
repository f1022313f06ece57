#include "tsogame/program.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_set>

namespace tsogame {

namespace {

template <class Names>
std::optional<std::uint32_t> index_of(const Names& names, std::string_view s) {
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - names.begin());
}

bool is_word(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_word);
}

void require_unique(const std::vector<std::string>& names, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!is_identifier(n)) throw ProgramError("invalid " + what + " identifier '" + n + "'");
    if (!seen.insert(n).second) throw ProgramError("duplicate " + what + " '" + n + "'");
  }
}

}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : ProgramError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                   ": " + what),
      line_(line),
      column_(column) {}

std::optional<StateId> Process::find_state(std::string_view s) const {
  return index_of(states, s);
}

void Program::validate() {
  outgoing_.clear();
  if (processes.empty()) throw ProgramError("empty program");
  if (domain.empty()) throw ProgramError("empty value domain");
  require_unique(domain, "value");
  require_unique(vars, "variable");
  std::vector<std::string> pnames;
  for (const auto& proc : processes) pnames.push_back(proc.name);
  require_unique(pnames, "process");

  std::vector<std::vector<std::vector<std::uint32_t>>> index(processes.size());
  for (std::size_t i = 0; i < processes.size(); ++i) {
    const Process& proc = processes[i];
    if (proc.states.empty()) throw ProgramError("process " + proc.name + " has no states");
    require_unique(proc.states, "state in process " + proc.name);
    if (proc.initial >= proc.states.size())
      throw ProgramError("process " + proc.name + " has an invalid initial state");
    index[i].resize(proc.states.size());
    for (std::uint32_t t = 0; t < proc.transitions.size(); ++t) {
      const Transition& tr = proc.transitions[t];
      if (tr.from >= proc.states.size() || tr.to >= proc.states.size())
        throw ProgramError("transition endpoint out of range in process " + proc.name);
      const Instruction& in = tr.instr;
      if (in.op == Op::Read || in.op == Op::Write || in.op == Op::Arw) {
        if (in.var >= vars.size())
          throw ProgramError("undeclared variable in process " + proc.name);
        if (in.value >= domain.size() || (in.op == Op::Arw && in.new_value >= domain.size()))
          throw ProgramError("undeclared value in process " + proc.name);
      }
      index[i][tr.from].push_back(t);
    }
  }
  outgoing_ = std::move(index);
}

std::span<const std::uint32_t> Program::outgoing(ProcId proc, StateId state) const {
  if (outgoing_.empty()) throw std::logic_error("program used before validate()");
  return outgoing_[proc][state];
}

std::optional<VarId> Program::find_var(std::string_view name) const {
  return index_of(vars, name);
}

std::optional<ValueId> Program::find_value(std::string_view name) const {
  return index_of(domain, name);
}

std::optional<ProcId> Program::find_process(std::string_view name) const {
  for (ProcId i = 0; i < processes.size(); ++i)
    if (processes[i].name == name) return i;
  return std::nullopt;
}

std::string Program::describe(const Instruction& in) const {
  switch (in.op) {
    case Op::Read: return "read " + vars[in.var] + " " + domain[in.value];
    case Op::Write: return "write " + vars[in.var] + " " + domain[in.value];
    case Op::Arw:
      return "arw " + vars[in.var] + " " + domain[in.value] + " " + domain[in.new_value];
    case Op::Skip: return "skip";
    case Op::Fence: return "fence";
  }
  return "?";
}

std::string Program::describe(LocalState ls) const {
  return processes[ls.proc].name + "." + processes[ls.proc].states[ls.state];
}

GlobalState initial_states(const Program& p) {
  GlobalState s;
  s.reserve(p.processes.size());
  for (const auto& proc : p.processes) s.push_back(proc.initial);
  return s;
}

FinalMask::FinalMask(const Program& p, const FinalSet& finals) {
  flags_.resize(p.processes.size());
  for (std::size_t i = 0; i < p.processes.size(); ++i)
    flags_[i].assign(p.processes[i].states.size(), 0);
  for (const auto& f : finals) {
    if (f.proc >= flags_.size() || f.state >= flags_[f.proc].size())
      throw ProgramError("final state out of range");
    if (!flags_[f.proc][f.state]) ++count_;
    flags_[f.proc][f.state] = 1;
  }
}

bool FinalMask::any(std::span<const StateId> states) const {
  if (count_ == 0) return false;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (flags_[i][states[i]]) return true;
  return false;
}

void validate_spec(const ProgramSpec& spec) {
  const Program& p = spec.program;
  if (spec.memory.size() != p.vars.size())
    throw ProgramError("initial memory must assign every variable");
  for (ValueId v : spec.memory)
    if (v >= p.domain.size()) throw ProgramError("initial memory value out of range");
  FinalMask check(p, spec.finals);
  (void)check;
}

LocalState parse_local_state(const Program& p, std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos)
    throw ProgramError("expected <process>.<state>, got '" + std::string(text) + "'");
  auto proc = p.find_process(text.substr(0, dot));
  if (!proc) throw ProgramError("undeclared process '" + std::string(text.substr(0, dot)) + "'");
  auto state = p.processes[*proc].find_state(text.substr(dot + 1));
  if (!state) throw ProgramError("undeclared state '" + std::string(text) + "'");
  return {*proc, *state};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  std::string text;
  int col = 0;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

std::vector<Token> tokenize(std::string_view line, int number) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (is_word(c)) {
      std::size_t j = i;
      while (j < line.size() && is_word(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({"->", col});
      i += 2;
    } else if (c == ':' || c == '=' || c == '.') {
      out.push_back({std::string(1, c), col});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", number, col);
    }
  }
  return out;
}

struct RawTransition {
  Token from;
  Token to;
  std::vector<Token> instr;
  int line = 0;
};

struct RawProcess {
  Token name;
  std::vector<Token> states;
  std::vector<int> init_lines;
  std::optional<StateId> initial;
  std::vector<RawTransition> transitions;
};

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t start = 0;
    int number = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      auto tokens = tokenize(text.substr(start, end - start), number);
      if (!tokens.empty()) lines_.push_back({number, std::move(tokens)});
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  ProgramSpec run() {
    for (const Line& l : lines_) statement(l);
    return resolve();
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col);
  }

  static void expect_ident(const Line& l, std::size_t i) {
    if (i >= l.tokens.size()) {
      int col = l.tokens.empty() ? 1 : l.tokens.back().col + static_cast<int>(l.tokens.back().text.size());
      fail("unexpected end of line", l.number, col);
    }
    if (!is_identifier(l.tokens[i].text))
      fail("expected identifier, got '" + l.tokens[i].text + "'", l.number, l.tokens[i].col);
  }

  void once(bool& seen, const Line& l) {
    if (seen) fail("duplicate section '" + l.tokens[0].text + "'", l.number, l.tokens[0].col);
    seen = true;
  }

  void statement(const Line& l) {
    const std::string& kw = l.tokens[0].text;
    if (kw == "domain") {
      once(seen_domain_, l);
      if (l.tokens.size() < 2) fail("domain needs at least one value", l.number, l.tokens[0].col);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) {
        expect_ident(l, i);
        domain_.push_back(l.tokens[i]);
      }
    } else if (kw == "vars") {
      once(seen_vars_, l);
      for (std::size_t i = 1; i < l.tokens.size(); ++i) {
        expect_ident(l, i);
        vars_.push_back(l.tokens[i]);
      }
    } else if (kw == "process") {
      expect_ident(l, 1);
      if (l.tokens.size() > 2) fail("trailing tokens after process name", l.number, l.tokens[2].col);
      processes_.push_back({});
      processes_.back().name = l.tokens[1];
    } else if (kw == "state") {
      if (processes_.empty()) fail("state outside of a process", l.number, l.tokens[0].col);
      expect_ident(l, 1);
      RawProcess& proc = processes_.back();
      proc.states.push_back(l.tokens[1]);
      if (l.tokens.size() > 2) {
        if (l.tokens[2].text != "init" || l.tokens.size() > 3)
          fail("expected 'init' or end of line", l.number, l.tokens[2].col);
        if (proc.initial)
          fail("second initial state in process " + proc.name.text, l.number, l.tokens[2].col);
        proc.initial = static_cast<StateId>(proc.states.size() - 1);
      }
    } else if (kw == "finals") {
      once(seen_finals_, l);
      std::size_t i = 1;
      while (i < l.tokens.size()) {
        expect_ident(l, i);
        if (i + 2 >= l.tokens.size() || l.tokens[i + 1].text != ".")
          fail("expected <process>.<state>", l.number, l.tokens[i].col);
        expect_ident(l, i + 2);
        finals_.push_back({l.tokens[i], l.tokens[i + 2], l.number});
        i += 3;
      }
    } else if (kw == "memory") {
      once(seen_memory_, l);
      std::size_t i = 1;
      while (i < l.tokens.size()) {
        expect_ident(l, i);
        if (i + 2 >= l.tokens.size() || l.tokens[i + 1].text != "=")
          fail("expected <var>=<value>", l.number, l.tokens[i].col);
        expect_ident(l, i + 2);
        memory_.push_back({l.tokens[i], l.tokens[i + 2], l.number});
        i += 3;
      }
    } else if (kw == "turn") {
      once(seen_turn_, l);
      expect_ident(l, 1);
      if (l.tokens[1].text == "A") {
        turn_ = Player::A;
      } else if (l.tokens[1].text == "B") {
        turn_ = Player::B;
      } else {
        fail("turn must be A or B", l.number, l.tokens[1].col);
      }
      if (l.tokens.size() > 2) fail("trailing tokens", l.number, l.tokens[2].col);
    } else if (l.tokens.size() >= 2 && l.tokens[1].text == "->") {
      if (processes_.empty()) fail("transition outside of a process", l.number, l.tokens[0].col);
      expect_ident(l, 0);
      expect_ident(l, 2);
      if (l.tokens.size() < 5 || l.tokens[3].text != ":")
        fail("expected ': <instruction>'", l.number,
             l.tokens.size() > 3 ? l.tokens[3].col : l.tokens[2].col);
      RawTransition rt{l.tokens[0], l.tokens[2], {}, l.number};
      rt.instr.assign(l.tokens.begin() + 4, l.tokens.end());
      processes_.back().transitions.push_back(std::move(rt));
    } else {
      fail("unknown statement '" + kw + "'", l.number, l.tokens[0].col);
    }
  }

  struct Pair {
    Token left;
    Token right;
    int line;
  };

  static std::vector<std::string> names(const std::vector<Token>& toks, const std::string& what,
                                        int line_of_first) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : toks) {
      if (!seen.insert(t.text).second)
        fail("duplicate " + what + " '" + t.text + "'", line_of_first, t.col);
      out.push_back(t.text);
    }
    return out;
  }

  int line_of(const std::string& keyword) const {
    for (const auto& l : lines_)
      if (l.tokens[0].text == keyword) return l.number;
    return 1;
  }

  ProgramSpec resolve() {
    ProgramSpec spec;
    Program& p = spec.program;
    if (processes_.empty()) throw ProgramError("empty program");
    if (!seen_domain_) throw ProgramError("missing 'domain' section");
    p.domain = names(domain_, "value", line_of("domain"));
    p.vars = names(vars_, "variable", line_of("vars"));

    std::unordered_set<std::string> pnames;
    for (const RawProcess& rp : processes_) {
      if (!pnames.insert(rp.name.text).second)
        throw ProgramError("duplicate process '" + rp.name.text + "'");
      Process proc;
      proc.name = rp.name.text;
      std::unordered_set<std::string> snames;
      for (const Token& s : rp.states) {
        if (!snames.insert(s.text).second)
          throw ProgramError("duplicate state '" + s.text + "' in process " + proc.name);
        proc.states.push_back(s.text);
      }
      if (proc.states.empty()) throw ProgramError("process " + proc.name + " has no states");
      if (!rp.initial) throw ProgramError("process " + proc.name + " has no initial state");
      proc.initial = *rp.initial;
      for (const RawTransition& rt : rp.transitions) {
        Transition t;
        auto from = proc.find_state(rt.from.text);
        if (!from) fail("undeclared state '" + rt.from.text + "'", rt.line, rt.from.col);
        auto to = proc.find_state(rt.to.text);
        if (!to) fail("undeclared state '" + rt.to.text + "'", rt.line, rt.to.col);
        t.from = *from;
        t.to = *to;
        t.instr = instruction(p, rt);
        proc.transitions.push_back(t);
      }
      p.processes.push_back(std::move(proc));
    }
    p.validate();

    for (const Pair& f : finals_) {
      auto proc = p.find_process(f.left.text);
      if (!proc) fail("undeclared process '" + f.left.text + "'", f.line, f.left.col);
      auto state = p.processes[*proc].find_state(f.right.text);
      if (!state) fail("undeclared state '" + f.right.text + "'", f.line, f.right.col);
      spec.finals.insert({*proc, *state});
    }

    spec.memory.assign(p.vars.size(), 0);
    std::vector<bool> assigned(p.vars.size(), false);
    for (const Pair& m : memory_) {
      auto var = p.find_var(m.left.text);
      if (!var) fail("undeclared variable '" + m.left.text + "'", m.line, m.left.col);
      auto val = p.find_value(m.right.text);
      if (!val) fail("undeclared value '" + m.right.text + "'", m.line, m.right.col);
      if (assigned[*var]) fail("duplicate memory entry for '" + m.left.text + "'", m.line, m.left.col);
      assigned[*var] = true;
      spec.memory[*var] = *val;
    }
    for (VarId x = 0; x < p.vars.size(); ++x)
      if (!assigned[x]) throw ProgramError("missing initial memory entry for variable '" + p.vars[x] + "'");
    spec.turn = turn_;
    return spec;
  }

  static Instruction instruction(const Program& p, const RawTransition& rt) {
    const auto& toks = rt.instr;
    const std::string& kw = toks[0].text;
    auto arity = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        int col = toks.size() > n + 1 ? toks[n + 1].col : toks.back().col;
        fail("'" + kw + "' takes " + std::to_string(n) + " operand(s)", rt.line, col);
      }
    };
    auto var = [&](std::size_t i) {
      auto v = p.find_var(toks[i].text);
      if (!v) fail("undeclared variable '" + toks[i].text + "'", rt.line, toks[i].col);
      return *v;
    };
    auto val = [&](std::size_t i) {
      auto v = p.find_value(toks[i].text);
      if (!v) fail("undeclared value '" + toks[i].text + "'", rt.line, toks[i].col);
      return *v;
    };
    if (kw == "read") {
      arity(2);
      return Instruction::read(var(1), val(2));
    }
    if (kw == "write") {
      arity(2);
      return Instruction::write(var(1), val(2));
    }
    if (kw == "arw") {
      arity(3);
      return Instruction::arw(var(1), val(2), val(3));
    }
    if (kw == "skip") {
      arity(0);
      return Instruction::skip();
    }
    if (kw == "fence") {
      arity(0);
      return Instruction::fence();
    }
    fail("unknown instruction '" + kw + "'", rt.line, toks[0].col);
  }

  std::vector<Line> lines_;
  std::vector<Token> domain_;
  std::vector<Token> vars_;
  std::vector<RawProcess> processes_;
  std::vector<Pair> finals_;
  std::vector<Pair> memory_;
  Player turn_ = Player::A;
  bool seen_domain_ = false;
  bool seen_vars_ = false;
  bool seen_finals_ = false;
  bool seen_memory_ = false;
  bool seen_turn_ = false;
};

}  // namespace

ProgramSpec parse_program(std::string_view text) {
  return Parser(text).run();
}

std::string print_program(const ProgramSpec& spec) {
  const Program& p = spec.program;
  std::ostringstream out;
  out << "domain";
  for (const auto& d : p.domain) out << ' ' << d;
  out << "\nvars";
  for (const auto& x : p.vars) out << ' ' << x;
  out << '\n';
  for (const auto& proc : p.processes) {
    out << "process " << proc.name << '\n';
    for (StateId s = 0; s < proc.states.size(); ++s) {
      out << "  state " << proc.states[s];
      if (s == proc.initial) out << " init";
      out << '\n';
    }
    for (const auto& t : proc.transitions)
      out << "  " << proc.states[t.from] << " -> " << proc.states[t.to] << " : "
          << p.describe(t.instr) << '\n';
  }
  out << "finals";
  for (const auto& f : spec.finals) out << ' ' << p.describe(f);
  out << "\nmemory";
  for (VarId x = 0; x < p.vars.size(); ++x) out << ' ' << p.vars[x] << '=' << p.domain[spec.memory[x]];
  out << '\n';
  if (spec.turn == Player::B) out << "turn B\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Ownership gadget

GadgetResult apply_ownership_gadget(const Program& p, const FinalSet& owned) {
  GadgetResult result{p, {}};
  std::map<ProcId, std::vector<StateId>> by_proc;
  for (const auto& ls : owned) {
    if (ls.proc >= p.processes.size() || ls.state >= p.processes[ls.proc].states.size())
      throw ProgramError("owned state out of range");
    by_proc[ls.proc].push_back(ls.state);
  }
  for (const auto& [proc_id, states] : by_proc) {
    const Process& in = p.processes[proc_id];
    Process& out = result.program.processes[proc_id];
    out.transitions.clear();
    std::vector<bool> is_owned(in.states.size(), false);
    for (StateId s : states) is_owned[s] = true;

    auto fresh = [&](const std::string& name) {
      if (out.find_state(name)) throw ProgramError("fresh state name collides: " + name);
      out.states.push_back(name);
      return static_cast<StateId>(out.states.size() - 1);
    };
    std::optional<StateId> sink;
    std::vector<Transition> tail;
    std::vector<int> counter(in.states.size(), 0);
    for (const Transition& t : in.transitions) {
      if (!is_owned[t.from]) {
        out.transitions.push_back(t);
        continue;
      }
      if (!sink) {
        sink = fresh("own__qF");
        tail.push_back({*sink, Instruction::skip(), *sink});
      }
      StateId mid = fresh(in.states[t.from] + "__own__h" + std::to_string(++counter[t.from]));
      out.transitions.push_back({t.from, t.instr, mid});
      out.transitions.push_back({mid, Instruction::skip(), t.to});
      out.transitions.push_back({mid, Instruction::skip(), *sink});
    }
    out.transitions.insert(out.transitions.end(), tail.begin(), tail.end());
    if (sink) result.extra_finals.insert({proc_id, *sink});
  }
  result.program.validate();
  return result;
}

}  // namespace tsogame
