#include "tsogame/reductions.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace tsogame {

void Pcs::validate() const {
  if (states.empty()) throw ProgramError("channel system has no states");
  if (initial >= states.size()) throw ProgramError("channel system initial state out of range");
  for (auto f : finals)
    if (f >= states.size()) throw ProgramError("channel system final state out of range");
  for (const auto& names : {states, messages}) {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) throw ProgramError("duplicate channel system name '" + n + "'");
  }
  std::set<std::tuple<std::uint32_t, ChannelOp, std::uint32_t, std::uint32_t>> rules_seen;
  for (const auto& r : rules) {
    if (r.from >= states.size() || r.to >= states.size())
      throw ProgramError("channel system rule references unknown state");
    if (r.op != ChannelOp::Nop && r.msg >= messages.size())
      throw ProgramError("channel system rule references unknown message");
    std::uint32_t msg = r.op == ChannelOp::Nop ? 0 : r.msg;
    if (!rules_seen.emplace(r.from, r.op, msg, r.to).second)
      throw ProgramError("duplicate channel system rule from '" + states[r.from] + "'");
  }
}

std::vector<std::pair<std::size_t, PcsConfig>> pcs_successors(const Pcs& l, const PcsConfig& c) {
  std::vector<std::pair<std::size_t, PcsConfig>> out;
  for (std::size_t i = 0; i < l.rules.size(); ++i) {
    const auto& r = l.rules[i];
    if (r.from != c.state) continue;
    PcsConfig next{r.to, c.channel};
    if (r.op == ChannelOp::Send) {
      next.channel.push_back(r.msg);
    } else if (r.op == ChannelOp::Recv) {
      if (c.channel.empty() || c.channel.front() != r.msg) continue;
      next.channel.erase(next.channel.begin());
    }
    out.emplace_back(i, std::move(next));
  }
  return out;
}

PcsReachability pcs_reachable_bounded(const Pcs& l, const PcsConfig& c0,
                                      const std::set<std::uint32_t>& targets, std::size_t bound) {
  if (c0.channel.size() > bound) throw ProgramError("initial channel exceeds the bound");
  PcsReachability result;
  std::vector<PcsConfig> seen{c0};
  std::vector<std::pair<std::size_t, std::size_t>> parent{{0, 0}};
  std::map<PcsConfig, std::size_t> index{{c0, 0}};
  for (std::size_t head = 0; head < seen.size(); ++head) {
    if (targets.count(seen[head].state)) {
      result.reachable = true;
      for (std::size_t at = head; at != 0; at = parent[at].first)
        result.witness.push_back(parent[at].second);
      std::reverse(result.witness.begin(), result.witness.end());
      break;
    }
    for (auto& [rule, next] : pcs_successors(l, seen[head])) {
      if (next.channel.size() > bound) continue;
      if (!index.emplace(next, seen.size()).second) continue;
      seen.push_back(std::move(next));
      parent.emplace_back(head, rule);
    }
  }
  result.explored = seen.size();
  return result;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

class ProcessBuilder {
 public:
  explicit ProcessBuilder(std::string name) { proc_.name = std::move(name); }

  StateId add(const std::string& name) {
    if (!ids_.emplace(name, static_cast<StateId>(proc_.states.size())).second)
      throw ProgramError("generated state name collides: " + name);
    proc_.states.push_back(name);
    return static_cast<StateId>(proc_.states.size() - 1);
  }
  // Creates the state on first use; for states shared between gadgets.
  StateId shared(const std::string& name) {
    auto it = ids_.find(name);
    return it != ids_.end() ? it->second : add(name);
  }
  std::optional<StateId> find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  void edge(StateId from, Instruction in, StateId to) { proc_.transitions.push_back({from, in, to}); }
  void initial(StateId s) { proc_.initial = s; }
  Process take() { return std::move(proc_); }

 private:
  Process proc_;
  std::unordered_map<std::string, StateId> ids_;
};

// Variables and values shared by all three constructions.
struct Alphabet {
  VarId xw = 0;
  VarId xr = 1;
  VarId y = 2;
  ValueId zero = 0;
  ValueId one = 0;
  ValueId bot = 0;
  ValueId top = 0;
  std::size_t messages = 0;
  ValueId msg(std::uint32_t m) const { return m; }
};

Alphabet setup(const Pcs& l, Program& prog, bool with_top) {
  l.validate();
  prog.domain = l.messages;
  Alphabet a;
  a.messages = l.messages.size();
  a.zero = static_cast<ValueId>(prog.domain.size());
  prog.domain.push_back("0");
  a.one = a.zero + 1;
  prog.domain.push_back("1");
  a.bot = a.zero + 2;
  prog.domain.push_back("bot");
  if (with_top) {
    a.top = a.zero + 3;
    prog.domain.push_back("top");
  }
  prog.vars = {"x_w", "x_r", "y"};
  return a;
}

std::string op_name(const Pcs& l, const Pcs::Rule& r) {
  switch (r.op) {
    case ChannelOp::Send: return "send_" + l.messages[r.msg];
    case ChannelOp::Recv: return "recv_" + l.messages[r.msg];
    case ChannelOp::Nop: return "nop";
  }
  return "?";
}

std::string aux_name(const Pcs& l, const Pcs::Rule& r, int k) {
  return l.states[r.from] + "__" + op_name(l, r) + "__" + l.states[r.to] + "__h" + std::to_string(k);
}

void finish(ProgramSpec& spec, const Alphabet& a) {
  spec.program.validate();
  spec.memory = {a.bot, a.bot, a.zero};
  spec.turn = Player::B;
}

using In = Instruction;

// Channel process of the A construction.
Process atso_p1(const Pcs& l, const Alphabet& a) {
  ProcessBuilder b("P1");
  for (const auto& s : l.states) b.add(s);
  b.initial(l.initial);
  for (const auto& r : l.rules) {
    auto h = [&](int k) { return b.add(aux_name(l, r, k)); };
    switch (r.op) {
      case ChannelOp::Nop: {
        StateId h1 = h(1);
        b.edge(r.from, In::skip(), h1);
        b.edge(h1, In::skip(), r.to);
        break;
      }
      case ChannelOp::Send: {
        StateId h1 = h(1);
        b.edge(r.from, In::write(a.xw, a.msg(r.msg)), h1);
        b.edge(h1, In::write(a.y, a.one), r.to);
        break;
      }
      case ChannelOp::Recv: {
        StateId h1 = h(1), h2 = h(2), h3 = h(3), h4 = h(4), h5 = h(5), h6 = h(6);
        b.edge(r.from, In::skip(), h1);
        b.edge(h1, In::read(a.xr, a.msg(r.msg)), h2);
        b.edge(h2, In::read(a.xr, a.bot), h3);
        b.edge(h3, In::skip(), r.to);
        b.edge(h1, In::fence(), h4);
        b.edge(h4, In::skip(), h5);
        b.edge(h5, In::read(a.xw, a.bot), h6);
        break;
      }
    }
  }
  return b.take();
}

// Rotation process of the A construction. The per-message state q_m is
// named qm_<m>; q3 is shared by all messages.
Process atso_p2(const Pcs& l, const Alphabet& a) {
  ProcessBuilder b("P2");
  StateId q1 = b.add("q1");
  std::vector<StateId> qm;
  for (const auto& m : l.messages) qm.push_back(b.add("qm_" + m));
  std::map<int, StateId> q;
  for (int i = 3; i <= 10; ++i) q[i] = b.add("q" + std::to_string(i));
  StateId qf = b.add("qF");
  b.initial(q1);
  for (std::uint32_t m = 0; m < qm.size(); ++m) {
    b.edge(q1, In::read(a.xw, a.msg(m)), qm[m]);
    b.edge(qm[m], In::write(a.xr, a.msg(m)), q[3]);
  }
  b.edge(q[3], In::write(a.xw, a.bot), q[4]);
  b.edge(q[4], In::fence(), q[5]);
  b.edge(q[5], In::skip(), q[6]);
  b.edge(q[6], In::read(a.y, a.one), q[7]);
  b.edge(q[7], In::write(a.y, a.zero), q[8]);
  b.edge(q[8], In::fence(), q[9]);
  b.edge(q[9], In::write(a.xr, a.bot), q[10]);
  b.edge(q[10], In::fence(), q1);
  for (std::uint32_t m = 0; m < qm.size(); ++m) b.edge(q1, In::read(a.xw, a.msg(m)), qf);
  b.edge(q[3], In::read(a.y, a.one), qf);
  b.edge(q[4], In::skip(), qf);
  b.edge(q[5], In::read(a.y, a.one), qf);
  for (std::uint32_t m = 0; m < qm.size(); ++m) b.edge(q[9], In::read(a.xw, a.msg(m)), qf);
  return b.take();
}

// Deadlock arbiter: whoever is stuck moves to rho2 and the opponent picks.
Process atso_p3() {
  ProcessBuilder b("P3");
  StateId r1 = b.add("rho1"), r2 = b.add("rho2"), r3 = b.add("rho3"), rf = b.add("rhoF");
  b.initial(r1);
  b.edge(r1, In::skip(), r2);
  b.edge(r2, In::skip(), r3);
  b.edge(r2, In::skip(), rf);
  b.edge(r3, In::skip(), r3);
  b.edge(rf, In::skip(), rf);
  return b.take();
}

// Channel process shared by the B and AB constructions.
Process btso_p1(const Pcs& l, const Alphabet& a) {
  ProcessBuilder b("P1");
  for (const auto& s : l.states) b.add(s);
  b.initial(l.initial);
  auto losing_exits = [&](StateId h) {
    StateId hl = b.shared("hL");
    for (std::uint32_t m = 0; m < a.messages; ++m) b.edge(h, In::read(a.xr, a.msg(m)), hl);
  };
  for (const auto& r : l.rules) {
    StateId h = b.add(aux_name(l, r, 1));
    switch (r.op) {
      case ChannelOp::Nop:
        b.edge(r.from, In::skip(), h);
        b.edge(h, In::skip(), r.to);
        losing_exits(h);
        break;
      case ChannelOp::Send:
        b.edge(r.from, In::write(a.xw, a.msg(r.msg)), h);
        b.edge(h, In::write(a.y, a.one), r.to);
        losing_exits(h);
        break;
      case ChannelOp::Recv:
        b.edge(r.from, In::read(a.xr, a.msg(r.msg)), h);
        b.edge(h, In::read(a.xr, a.bot), r.to);
        break;
    }
  }
  if (auto hl = b.find("hL")) b.edge(*hl, In::skip(), *hl);
  std::optional<StateId> hf;
  for (std::uint32_t s : l.finals) {
    if (!hf) {
      hf = b.add("hF");
      b.edge(*hf, In::skip(), *hf);
    }
    b.edge(s, In::write(a.xw, a.top), *hf);
  }
  return b.take();
}

Process btso_p2(const Pcs& l, const Alphabet& a) {
  ProcessBuilder b("P2");
  StateId q1 = b.add("q1");
  std::vector<StateId> qm;
  for (const auto& m : l.messages) qm.push_back(b.add("qm_" + m));
  std::map<int, StateId> q;
  for (int i = 3; i <= 14; ++i) q[i] = b.add("q" + std::to_string(i));
  std::map<int, StateId> h;
  for (int i = 1; i <= 5; ++i) h[i] = b.add("h" + std::to_string(i));
  StateId qf = b.add("qF");
  StateId ql = b.add("qL");
  b.initial(q1);
  const auto msgs = static_cast<std::uint32_t>(qm.size());

  for (std::uint32_t m = 0; m < msgs; ++m) {
    b.edge(q1, In::read(a.xw, a.msg(m)), qm[m]);
    b.edge(qm[m], In::write(a.xr, a.msg(m)), q[3]);
  }
  b.edge(q[3], In::fence(), q[4]);
  b.edge(q[4], In::write(a.xw, a.bot), q[5]);
  b.edge(q[5], In::skip(), q[6]);
  b.edge(q[6], In::fence(), q[7]);
  b.edge(q[7], In::read(a.y, a.zero), q[8]);
  b.edge(q[8], In::read(a.y, a.one), q[9]);
  b.edge(q[9], In::write(a.y, a.zero), q[10]);
  b.edge(q[10], In::fence(), q[11]);
  b.edge(q[11], In::read(a.xw, a.bot), q[12]);
  b.edge(q[12], In::write(a.xr, a.bot), q[13]);
  b.edge(q[13], In::skip(), q[14]);
  b.edge(q[14], In::fence(), q1);

  // Two-way detours that let B spend a move (and update) or reach qF.
  const std::pair<int, StateId> detours[] = {{1, q1}, {2, q[3]}, {3, q[8]}, {4, q[10]}, {5, q[14]}};
  for (const auto& [k, at] : detours) {
    b.edge(at, In::skip(), h[k]);
    b.edge(h[k], In::skip(), qf);
    b.edge(h[k], In::skip(), at);
  }

  for (std::uint32_t m = 0; m < msgs; ++m) b.edge(q1, In::read(a.xw, a.msg(m)), ql);
  for (std::uint32_t m = 0; m < msgs; ++m) b.edge(qm[m], In::skip(), qf);
  b.edge(q[3], In::skip(), ql);
  b.edge(q[4], In::skip(), qf);
  b.edge(q[6], In::skip(), ql);
  b.edge(q[7], In::read(a.y, a.one), ql);
  for (std::uint32_t m = 0; m < msgs; ++m) b.edge(q[11], In::read(a.xw, a.msg(m)), ql);
  for (std::uint32_t m = 0; m < msgs; ++m) b.edge(q[14], In::read(a.xw, a.msg(m)), ql);
  b.edge(q1, In::read(a.xw, a.top), qf);
  b.edge(qf, In::skip(), qf);
  b.edge(ql, In::skip(), ql);
  return b.take();
}

Process abtso_p2(const Pcs& l, const Alphabet& a) {
  ProcessBuilder b("P2");
  StateId q1 = b.add("q1");
  StateId q2 = b.add("q2");
  std::vector<StateId> qm;
  for (const auto& m : l.messages) qm.push_back(b.add("qm_" + m));
  std::map<int, StateId> q;
  for (int i = 4; i <= 12; ++i) q[i] = b.add("q" + std::to_string(i));
  StateId qf = b.add("qF");
  StateId ql = b.add("qL");
  b.initial(q1);
  const auto msgs = static_cast<std::uint32_t>(qm.size());
  auto each_msg = [&](StateId from, StateId to) {
    for (std::uint32_t m = 0; m < msgs; ++m) b.edge(from, In::read(a.xw, a.msg(m)), to);
  };

  b.edge(q1, In::skip(), q2);
  for (std::uint32_t m = 0; m < msgs; ++m) {
    b.edge(q2, In::read(a.xw, a.msg(m)), qm[m]);
    b.edge(qm[m], In::write(a.xr, a.msg(m)), q[4]);
  }
  b.edge(q[4], In::write(a.xw, a.bot), q[5]);
  b.edge(q[5], In::skip(), q[6]);
  b.edge(q[6], In::fence(), q[7]);
  b.edge(q[7], In::skip(), q[8]);
  b.edge(q[8], In::write(a.y, a.zero), q[9]);
  b.edge(q[9], In::skip(), q[10]);
  b.edge(q[10], In::fence(), q[11]);
  b.edge(q[11], In::write(a.xr, a.bot), q[12]);
  b.edge(q[12], In::skip(), q1);

  b.edge(q2, In::skip(), qf);
  for (StateId s : qm) b.edge(s, In::skip(), ql);
  b.edge(q[4], In::skip(), qf);
  b.edge(q[6], In::skip(), ql);
  b.edge(q[10], In::skip(), ql);
  each_msg(q1, qf);
  each_msg(q1, ql);
  b.edge(q2, In::read(a.xw, a.bot), ql);
  b.edge(q2, In::read(a.y, a.one), ql);
  for (StateId s : qm) b.edge(s, In::read(a.y, a.one), qf);
  b.edge(q[4], In::read(a.y, a.one), ql);
  b.edge(q[5], In::read(a.y, a.one), qf);
  b.edge(q[5], In::read(a.y, a.one), ql);
  b.edge(q[6], In::read(a.y, a.one), qf);
  b.edge(q[7], In::read(a.y, a.one), ql);
  b.edge(q[8], In::read(a.y, a.zero), qf);
  each_msg(q[8], qf);
  each_msg(q[9], ql);
  each_msg(q[10], qf);
  each_msg(q[11], ql);
  each_msg(q[12], qf);
  b.edge(q1, In::read(a.xw, a.top), qf);
  b.edge(qf, In::skip(), qf);
  b.edge(ql, In::skip(), ql);
  return b.take();
}

}  // namespace

ProgramSpec generate_atso_program(const Pcs& l) {
  ProgramSpec spec;
  Alphabet a = setup(l, spec.program, false);
  spec.program.processes = {atso_p1(l, a), atso_p2(l, a), atso_p3()};
  finish(spec, a);
  for (auto f : l.finals) spec.finals.insert({0, f});
  spec.finals.insert({1, *spec.program.processes[1].find_state("qF")});
  spec.finals.insert({2, *spec.program.processes[2].find_state("rhoF")});
  return spec;
}

ProgramSpec generate_btso_program(const Pcs& l) {
  ProgramSpec spec;
  Alphabet a = setup(l, spec.program, true);
  spec.program.processes = {btso_p1(l, a), btso_p2(l, a)};
  finish(spec, a);
  spec.finals.insert({1, *spec.program.processes[1].find_state("qF")});
  return spec;
}

ProgramSpec generate_abtso_program(const Pcs& l) {
  ProgramSpec spec;
  Alphabet a = setup(l, spec.program, true);
  spec.program.processes = {btso_p1(l, a), abtso_p2(l, a)};
  finish(spec, a);
  spec.finals.insert({1, *spec.program.processes[1].find_state("qF")});
  return spec;
}

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::A: return "A";
    case Variant::B: return "B";
    case Variant::AB: return "AB";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "A") return Variant::A;
  if (s == "B") return Variant::B;
  if (s == "AB") return Variant::AB;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

UpdatePolicy variant_policy(Variant v) noexcept {
  switch (v) {
    case Variant::A: return {UpdateRight::Always, UpdateRight::Never};
    case Variant::B: return {UpdateRight::Never, UpdateRight::Always};
    case Variant::AB: return {UpdateRight::After, UpdateRight::After};
  }
  return {};
}

ProgramSpec generate_program(const Pcs& l, Variant v) {
  switch (v) {
    case Variant::A: return generate_atso_program(l);
    case Variant::B: return generate_btso_program(l);
    case Variant::AB: return generate_abtso_program(l);
  }
  throw std::invalid_argument("unknown variant");
}

HarnessReport reduction_harness(const Pcs& l, Variant v, std::size_t capacity,
                                std::size_t max_nodes) {
  if (capacity < 2) throw std::invalid_argument("harness capacity must be at least 2");
  auto t0 = std::chrono::steady_clock::now();
  HarnessReport report;
  report.variant = v;
  report.capacity = capacity;
  report.channel_bound = (capacity - 2) / 2;
  report.pcs_reachable =
      pcs_reachable_bounded(l, {l.initial, {}}, l.finals, report.channel_bound).reachable;

  ProgramSpec spec = generate_program(l, v);
  ExploreOptions opts;
  opts.max_nodes = max_nodes;
  TsoGame game = build_tso_game_bounded(spec.program, spec.finals, variant_policy(v),
                                        initial_tso_start(spec), capacity, opts);
  Solution s = solve(game.game);
  report.winner = s.winner[game.initial()];
  report.configs = game.game.size();
  report.agree = report.pcs_reachable == (report.winner == Player::B);
  report.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace tsogame
