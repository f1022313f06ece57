#include "tsogame/io.hpp"

#include <unordered_map>

namespace tsogame::io {

namespace {

json states_json(const Program& p, const GlobalState& states) {
  json out = json::object();
  for (ProcId i = 0; i < p.processes.size(); ++i)
    out[p.processes[i].name] = p.processes[i].states[states[i]];
  return out;
}

json memory_json(const Program& p, const Memory& memory) {
  json out = json::object();
  for (VarId x = 0; x < p.vars.size(); ++x) out[p.vars[x]] = p.domain[memory[x]];
  return out;
}

json sink_json(const NodeKind kind, Player owner) {
  return {{"owner", std::string(to_string(owner))},
          {"sink", kind == NodeKind::SinkBWins ? "B-wins" : "A-wins"}};
}

template <class Config>
json node_json_impl(const Program& p, const ProgramGame<Config>& g, NodeId n) {
  const Player owner = g.game.owner(n);
  if (g.is_sink(n)) return sink_json(g.kinds[n], owner);
  json out = config_json(p, g.configs[n]);
  out["owner"] = std::string(to_string(owner));
  return out;
}

[[noreturn]] void bad_input(const std::string& what) { throw ProgramError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) bad_input("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) bad_input(std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const json& arr = field(j, key);
  if (!arr.is_array()) bad_input(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) bad_input(std::string("field '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad_input(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

class NameIndex {
 public:
  NameIndex(const std::vector<std::string>& names, std::string what) : what_(std::move(what)) {
    for (std::uint32_t i = 0; i < names.size(); ++i) ids_.emplace(names[i], i);
  }
  std::uint32_t operator()(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) bad_input("unknown " + what_ + " '" + name + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::string what_;
};

}  // namespace

json config_json(const Program& p, const ScConfig& c) {
  return {{"states", states_json(p, c.states)}, {"memory", memory_json(p, c.memory)}};
}

json config_json(const Program& p, const TsoConfig& c) {
  json buffers = json::object();
  for (ProcId i = 0; i < p.processes.size(); ++i) {
    json entries = json::array();
    for (const auto& e : c.buffers[i]) entries.push_back({p.vars[e.var], p.domain[e.value]});
    buffers[p.processes[i].name] = std::move(entries);
  }
  return {{"states", states_json(p, c.states)},
          {"buffers", std::move(buffers)},
          {"memory", memory_json(p, c.memory)}};
}

json config_json(const Program& p, const View& v) {
  json values = json::object();
  json buffered = json::object();
  json fencable = json::object();
  for (ProcId i = 0; i < p.processes.size(); ++i) {
    const std::string& name = p.processes[i].name;
    json row = json::object();
    json pending = json::array();
    for (VarId x = 0; x < p.vars.size(); ++x) {
      row[p.vars[x]] = p.domain[v.value(i, x)];
      if (v.is_buffered(i, x)) pending.push_back(p.vars[x]);
    }
    values[name] = std::move(row);
    buffered[name] = std::move(pending);
    fencable[name] = v.fencable[i] != 0;
  }
  return {{"states", states_json(p, v.states)},
          {"values", std::move(values)},
          {"buffered", std::move(buffered)},
          {"fencable", std::move(fencable)}};
}

json node_json(const Program& p, const ScGame& g, NodeId n) { return node_json_impl(p, g, n); }
json node_json(const Program& p, const TsoGame& g, NodeId n) { return node_json_impl(p, g, n); }
json node_json(const Program& p, const ViewGame& g, NodeId n) { return node_json_impl(p, g, n); }

std::string describe_move(const Program& p, const MoveWitness& w) {
  if (w.is_sink()) return "deadlock";
  std::string out;
  auto append = [&](const std::string& part) {
    if (!out.empty()) out += "; ";
    out += part;
  };
  for (ProcId u : w.pre) append("up " + p.processes[u].name);
  const Process& proc = p.processes[w.proc];
  append(proc.name + ": " + p.describe(proc.transitions[w.transition].instr));
  for (ProcId u : w.post) append("up " + p.processes[u].name);
  return out;
}

json sc_witness_json(const Program& p, const std::vector<StepLabel>& steps) {
  json out = json::array();
  for (const auto& s : steps) {
    const Process& proc = p.processes[s.proc];
    const Transition& t = proc.transitions[s.transition];
    out.push_back({{"proc", proc.name},
                   {"kind", "instr"},
                   {"from", proc.states[t.from]},
                   {"instr", p.describe(t.instr)},
                   {"to", proc.states[t.to]}});
  }
  return out;
}

json tso_witness_json(const Program& p, const TsoConfig& c0, const std::vector<TsoStep>& steps) {
  json out = json::array();
  TsoConfig c = c0;
  for (const auto& s : steps) {
    const Process& proc = p.processes[s.proc];
    if (s.kind == TsoStep::Kind::Update) {
      const BufferEntry& e = c.buffers[s.proc].front();
      out.push_back({{"proc", proc.name},
                     {"kind", "update"},
                     {"var", p.vars[e.var]},
                     {"value", p.domain[e.value]}});
      c = apply_update(c, s.proc);
      continue;
    }
    const Transition& t = proc.transitions[s.transition];
    out.push_back({{"proc", proc.name},
                   {"kind", "instr"},
                   {"from", proc.states[t.from]},
                   {"instr", p.describe(t.instr)},
                   {"to", proc.states[t.to]}});
    for (auto& [step, next] : instruction_successors(p, c)) {
      if (step == s) {
        c = std::move(next);
        break;
      }
    }
  }
  return out;
}

namespace {

json stats_json(const SolveStats& s) {
  return {{"configs", s.configs}, {"edges", s.edges}, {"solveMs", s.solve_ms}};
}

}  // namespace

json verdict_json(const GameVerdict& v) {
  json out = {{"semantics", "tso"},
              {"policy", v.policy.to_string()},
              {"group", std::string(to_string(v.group))},
              {"decidable", v.decidable},
              {"stats", stats_json(v.stats)}};
  if (v.winner) out["winner"] = std::string(to_string(*v.winner));
  if (v.bounded) {
    out["boundedAnalysis"] = {{"capacity", v.bounded->capacity},
                              {"winner", std::string(to_string(v.bounded->winner))},
                              {"configs", v.bounded->configs},
                              {"edges", v.bounded->edges},
                              {"caveat", std::string(BoundedReport::kCaveat)}};
  }
  return out;
}

json sc_verdict_json(Player winner, const SolveStats& stats) {
  return {{"semantics", "sc"}, {"decidable", true}, {"winner", std::string(to_string(winner))}, {"stats", stats_json(stats)}};
}

json harness_json(const HarnessReport& r) {
  return {{"variant", std::string(to_string(r.variant))},
          {"capacity", r.capacity},
          {"channelBound", r.channel_bound},
          {"pcsReachable", r.pcs_reachable},
          {"gameWinnerAtBound", std::string(to_string(r.winner))},
          {"agree", r.agree},
          {"configs", r.configs}};
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad_input(std::string("invalid JSON: ") + e.what());
  }
}

AtmInput parse_atm(const json& j) {
  AtmInput in;
  Atm& atm = in.atm;
  atm.alphabet = string_list(j, "alphabet");
  atm.states = string_list(j, "states");
  NameIndex letter(atm.alphabet, "letter");
  NameIndex state(atm.states, "ATM state");
  atm.blank = letter(j.contains("blank") ? string_field(j, "blank") : std::string("_"));
  atm.existential.assign(atm.states.size(), false);
  for (const auto& q : string_list(j, "existential")) atm.existential[state(q)] = true;
  atm.initial = state(string_field(j, "initial"));
  atm.accepting = state(string_field(j, "accepting"));
  const json& bound = field(j, "spaceBound");
  if (!bound.is_number_integer()) bad_input("field 'spaceBound' must be an integer");
  atm.space_bound = bound.get<int>();
  const json& rules = field(j, "transitions");
  if (!rules.is_array()) bad_input("field 'transitions' must be an array");
  for (const auto& r : rules) {
    Atm::Rule rule;
    rule.from = state(string_field(r, "from"));
    rule.read = letter(string_field(r, "read"));
    rule.to = state(string_field(r, "to"));
    rule.write = letter(string_field(r, "write"));
    std::string move = string_field(r, "move");
    if (move == "L") {
      rule.move = Atm::Move::Left;
    } else if (move == "R") {
      rule.move = Atm::Move::Right;
    } else {
      bad_input("move must be \"L\" or \"R\", got '" + move + "'");
    }
    atm.rules.push_back(rule);
  }
  if (j.contains("word"))
    for (const auto& l : string_list(j, "word")) in.word.push_back(letter(l));
  atm.validate();
  return in;
}

Pcs parse_pcs(const json& j) {
  Pcs l;
  l.states = string_list(j, "states");
  l.messages = string_list(j, "messages");
  NameIndex state(l.states, "channel system state");
  NameIndex message(l.messages, "message");
  l.initial = state(string_field(j, "initial"));
  for (const auto& s : string_list(j, "finals")) l.finals.insert(state(s));
  const json& rules = field(j, "transitions");
  if (!rules.is_array()) bad_input("field 'transitions' must be an array");
  for (const auto& r : rules) {
    Pcs::Rule rule;
    rule.from = state(string_field(r, "from"));
    rule.to = state(string_field(r, "to"));
    std::string op = string_field(r, "op");
    if (op == "send") {
      rule.op = ChannelOp::Send;
    } else if (op == "recv") {
      rule.op = ChannelOp::Recv;
    } else if (op == "nop") {
      rule.op = ChannelOp::Nop;
    } else {
      bad_input("op must be send, recv or nop, got '" + op + "'");
    }
    if (rule.op != ChannelOp::Nop) rule.msg = message(string_field(r, "msg"));
    l.rules.push_back(rule);
  }
  l.validate();
  return l;
}

json strategy_json(const std::vector<std::string>& labels, const Game& g, const Strategy& s,
                   const std::string& policy) {
  json moves = json::object();
  for (NodeId n = 0; n < g.size(); ++n)
    if (g.owner(n) == s.player && s.defined(n)) moves[labels[n]] = labels[s.at(n)];
  return {{"player", std::string(to_string(s.player))}, {"policy", policy}, {"moves", std::move(moves)}};
}

Strategy load_strategy(const json& j, const std::vector<std::string>& labels) {
  const std::string who = string_field(j, "player");
  Strategy s;
  if (who == "A") {
    s.player = Player::A;
  } else if (who == "B") {
    s.player = Player::B;
  } else {
    bad_input("strategy player must be A or B");
  }
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId n = 0; n < labels.size(); ++n) ids.emplace(labels[n], n);
  s.choice.assign(labels.size(), kNoNode);
  const json& moves = field(j, "moves");
  if (!moves.is_object()) bad_input("strategy 'moves' must be an object");
  for (const auto& [from, to] : moves.items()) {
    if (!to.is_string()) bad_input("strategy targets must be strings");
    auto src = ids.find(from);
    if (src == ids.end()) continue;
    auto dst = ids.find(to.get<std::string>());
    if (dst == ids.end()) bad_input("strategy moves to an unexplored configuration: " + to.get<std::string>());
    s.choice[src->second] = dst->second;
  }
  return s;
}

}  // namespace tsogame::io
