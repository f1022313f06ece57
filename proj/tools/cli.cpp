#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tsogame/io.hpp"

namespace tsogame::cli {

namespace {

using io::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool debug_logging() {
  const char* level = std::getenv("TSOGAME_LOG");
  return level != nullptr && std::string_view(level) == "debug";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return items;
}

FinalSet parse_local_states(const Program& p, const std::string& text) {
  FinalSet out;
  for (const auto& item : split_list(text)) out.insert(parse_local_state(p, item));
  return out;
}

// Common options for commands that build a game from a program file.
struct GameArgs {
  std::string program;
  std::string policy;
  std::string semantics = "tso";
  std::string deadlock = "loses";
  std::string finals;
  std::size_t max_nodes = ExploreOptions{}.max_nodes;

  void add_to(CLI::App* cmd) {
    cmd->add_option("program", program, "Program file")->required();
    cmd->add_option("--policy", policy, "Update rights, e.g. A=always,B=never");
    cmd->add_option("--semantics", semantics, "sc or tso")
        ->check(CLI::IsMember({"sc", "tso"}))
        ->capture_default_str();
    cmd->add_option("--deadlock", deadlock, "loses (deadlocked player loses) or reject")
        ->check(CLI::IsMember({"loses", "reject"}))
        ->capture_default_str();
    cmd->add_option("--finals", finals, "Override the program's finals, e.g. P1.q3,P2.r2");
    cmd->add_option("--max-nodes", max_nodes, "Size guard on explored configurations")
        ->capture_default_str();
  }

  ProgramSpec load() const {
    ProgramSpec spec = parse_program(read_file(program));
    validate_spec(spec);
    if (!finals.empty()) spec.finals = parse_local_states(spec.program, finals);
    return spec;
  }

  bool sc() const { return semantics == "sc"; }

  UpdatePolicy update_policy() const {
    if (policy.empty()) throw InputError("--policy is required for TSO games");
    return UpdatePolicy::parse(policy);
  }

  ExploreOptions explore() const {
    ExploreOptions opts;
    opts.max_nodes = max_nodes;
    opts.deadlock = deadlock == "reject" ? DeadlockPolicy::Reject : DeadlockPolicy::DeadlockedPlayerLoses;
    return opts;
  }
};

template <class Config>
void dump_strategies(const std::string& dir, const Program& p, const ProgramGame<Config>& g,
                     const Solution& s, const std::string& policy) {
  std::filesystem::create_directories(dir);
  const auto labels = io::node_labels(p, g);
  write_file(std::filesystem::path(dir) / "strategy_A.json",
             io::strategy_json(labels, g.game, s.strategy_a, policy).dump(2) + "\n");
  write_file(std::filesystem::path(dir) / "strategy_B.json",
             io::strategy_json(labels, g.game, s.strategy_b, policy).dump(2) + "\n");
}

// ---------------------------------------------------------------------------

struct SolveArgs : GameArgs {
  std::size_t bounded = 0;
  bool has_bounded = false;
  std::string dump_dir;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  ProgramSpec spec = a.load();
  const Program& p = spec.program;
  if (a.sc()) {
    auto t0 = std::chrono::steady_clock::now();
    ScGame g = build_sc_game(p, spec.finals, initial_sc_config(spec), spec.turn, a.explore());
    Solution s = solve(g.game);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    json v = io::sc_verdict_json(s.winner[g.initial()], {g.game.size(), g.game.num_edges(), ms});
    if (!a.dump_dir.empty()) dump_strategies(a.dump_dir, p, g, s, "sc");
    out << v.dump(2) << "\n";
    return kExitDecided;
  }
  const UpdatePolicy policy = a.update_policy();
  SolveOptions opts;
  opts.explore = a.explore();
  if (a.has_bounded) opts.bounded_capacity = a.bounded;
  GameVerdict verdict = solve(p, spec.finals, initial_tso_start(spec), policy, opts);
  json v = io::verdict_json(verdict);
  if (!a.dump_dir.empty() && verdict.solved) {
    std::visit([&](const auto& g) { dump_strategies(a.dump_dir, p, g, verdict.solved->solution, policy.to_string()); },
               verdict.solved->game);
  }
  out << v.dump(2) << "\n";
  return verdict.decidable ? kExitDecided : kExitUndecidable;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string policy;
  bool all = false;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out) {
  if (a.all) {
    for (UpdateRight ra : kAllRights)
      for (UpdateRight rb : kAllRights) {
        UpdatePolicy cell{ra, rb};
        out << cell.to_string() << " " << to_string(classify(cell)) << "\n";
      }
    return kExitDecided;
  }
  if (a.policy.empty()) throw InputError("give a policy or --all");
  out << to_string(classify(UpdatePolicy::parse(a.policy))) << "\n";
  return kExitDecided;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::string input;
  std::string owned;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  if (a.kind == "atm") {
    io::AtmInput in = io::parse_atm(io::parse_json_text(read_file(a.input)));
    out << print_program(atm_to_program(in.atm, in.word));
  } else if (a.kind == "ownership") {
    ProgramSpec spec = parse_program(read_file(a.input));
    validate_spec(spec);
    if (a.owned.empty()) throw InputError("--owned is required for the ownership gadget");
    GadgetResult r = apply_ownership_gadget(spec.program, parse_local_states(spec.program, a.owned));
    ProgramSpec result{std::move(r.program), spec.finals, spec.memory, spec.turn};
    result.finals.insert(r.extra_finals.begin(), r.extra_finals.end());
    out << print_program(result);
  } else {
    Variant v = a.kind == "pcs-a" ? Variant::A : a.kind == "pcs-b" ? Variant::B : Variant::AB;
    Pcs l = io::parse_pcs(io::parse_json_text(read_file(a.input)));
    out << print_program(generate_program(l, v));
  }
  return kExitDecided;
}

// ---------------------------------------------------------------------------

struct DotArgs : GameArgs {
  std::size_t capacity = 1;
  std::size_t max_depth = 0;
  bool has_max_depth = false;
};

int cmd_export_dot(const DotArgs& a, std::ostream& out) {
  ProgramSpec spec = a.load();
  ExploreOptions opts = a.explore();
  opts.record_witnesses = true;
  if (a.has_max_depth) opts.max_depth = a.max_depth;
  auto emit = [&](const auto& g) {
    const auto labels = io::node_labels(spec.program, g);
    const auto edges = io::edge_labels(spec.program, g);
    out << export_dot(g.game, labels, edges);
  };
  if (a.sc()) {
    emit(build_sc_game(spec.program, spec.finals, initial_sc_config(spec), spec.turn, opts));
  } else {
    emit(build_tso_game_bounded(spec.program, spec.finals, a.update_policy(), initial_tso_start(spec),
                                a.capacity, opts));
  }
  return kExitDecided;
}

// ---------------------------------------------------------------------------

struct ReplayArgs : GameArgs {
  std::size_t capacity = 0;
  bool has_capacity = false;
  std::string strategy_a;
  std::string strategy_b;
  std::size_t horizon = 100;
};

template <class Config>
int replay_on(const ReplayArgs& a, const Program& p, const ProgramGame<Config>& g, const Solution& s,
              std::ostream& out, std::ostream& err) {
  const auto labels = io::node_labels(p, g);
  auto strategy = [&](const std::string& path, const Strategy& fallback, Player who) {
    if (path.empty()) return fallback;
    Strategy loaded = io::load_strategy(io::parse_json_text(read_file(path)), labels);
    if (loaded.player != who)
      throw InputError("'" + path + "' holds a strategy for player " + std::string(to_string(loaded.player)));
    return loaded;
  };
  const Strategy sa = strategy(a.strategy_a, s.strategy_a, Player::A);
  const Strategy sb = strategy(a.strategy_b, s.strategy_b, Player::B);
  Play result;
  try {
    result = play(g.game, sa, sb, g.initial(), a.horizon);
  } catch (const StrategyError& e) {
    err << "error: strategy of player " << to_string(g.game.owner(e.node()))
        << " has no valid move at configuration " << labels[e.node()] << "\n";
    return kExitInputError;
  }
  out << "start " << labels[result.prefix.front()] << "\n";
  for (std::size_t i = 1; i < result.prefix.size(); ++i) {
    NodeId from = result.prefix[i - 1];
    NodeId to = result.prefix[i];
    auto succ = g.game.successors(from);
    std::size_t edge = g.game.edge_offset(from) +
                       static_cast<std::size_t>(std::lower_bound(succ.begin(), succ.end(), to) - succ.begin());
    out << "step " << i << " " << to_string(g.game.owner(from)) << " ["
        << io::describe_move(p, g.witnesses[edge]) << "] " << labels[to] << "\n";
  }
  const std::size_t moves = result.prefix.size() - 1;
  if (result.outcome == Play::Outcome::BReachedFinal)
    out << "outcome: B reached a final configuration after " << moves << " moves\n";
  else
    out << "outcome: A avoided the finals for " << moves << " moves\n";
  return kExitDecided;
}

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  ProgramSpec spec = a.load();
  const Program& p = spec.program;
  ExploreOptions opts = a.explore();
  opts.record_witnesses = true;
  if (a.sc()) {
    ScGame g = build_sc_game(p, spec.finals, initial_sc_config(spec), spec.turn, opts);
    return replay_on(a, p, g, solve(g.game), out, err);
  }
  const UpdatePolicy policy = a.update_policy();
  if (a.has_capacity) {
    TsoGame g = build_tso_game_bounded(p, spec.finals, policy, initial_tso_start(spec), a.capacity, opts);
    return replay_on(a, p, g, solve(g.game), out, err);
  }
  SolveOptions so;
  so.explore = opts;
  GameVerdict v = solve(p, spec.finals, initial_tso_start(spec), policy, so);
  if (!v.solved) {
    err << "error: policy " << policy.to_string() << " is in group III; pass --capacity to replay on a bounded game\n";
    return kExitUndecidable;
  }
  return std::visit([&](const auto& g) { return replay_on(a, p, g, v.solved->solution, out, err); },
                    v.solved->game);
}

// ---------------------------------------------------------------------------

struct ReachArgs {
  std::string mode;
  std::string program;
  std::string target;
  std::size_t capacity = 1;
};

int cmd_reach(const ReachArgs& a, std::ostream& out) {
  ProgramSpec spec = parse_program(read_file(a.program));
  validate_spec(spec);
  const Program& p = spec.program;
  StateTarget target = a.target.empty() ? StateTarget::any_of(spec.finals) : StateTarget::parse(p, a.target);
  json result;
  if (a.mode == "sc") {
    ScReachability r = sc_reachable(p, initial_sc_config(spec), target);
    result = {{"semantics", "sc"},
              {"reachable", r.reachable},
              {"explored", r.explored},
              {"witness", io::sc_witness_json(p, r.witness)}};
  } else {
    TsoConfig c0 = initial_tso_config(spec);
    TsoReachability r = tso_reachable_bounded(p, c0, target, a.capacity);
    result = {{"semantics", "tso"},
              {"capacity", a.capacity},
              {"reachable", r.reachable},
              {"explored", r.explored},
              {"witness", io::tso_witness_json(p, c0, r.witness)}};
  }
  out << result.dump(2) << "\n";
  return kExitDecided;
}

// ---------------------------------------------------------------------------

struct HarnessArgs {
  std::vector<std::string> inputs;
  std::string variant = "all";
  std::size_t capacity = kHarnessCapacity;
  std::size_t max_nodes = 5'000'000;
  unsigned jobs = 1;
  bool json_output = false;
};

int cmd_harness(const HarnessArgs& a, std::ostream& out, std::ostream& err) {
  if (a.capacity < 2) throw ProgramError("harness capacity must be at least 2");
  std::vector<Variant> variants;
  if (a.variant == "all")
    variants = {Variant::A, Variant::B, Variant::AB};
  else
    variants = {parse_variant(a.variant)};

  struct Job {
    std::string input;
    Pcs pcs;
    Variant variant;
    HarnessReport report;
    std::string error;
  };
  std::vector<Job> jobs;
  for (const auto& path : a.inputs) {
    Pcs l = io::parse_pcs(io::parse_json_text(read_file(path)));
    for (Variant v : variants) jobs.push_back({path, l, v, {}, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].report = reduction_harness(jobs[i].pcs, jobs[i].variant, a.capacity, a.max_nodes);
      } catch (const std::exception& e) {
        jobs[i].error = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(a.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool all_agree = true;
  json rows = json::array();
  for (const auto& job : jobs) {
    if (!job.error.empty()) {
      err << "error: " << job.input << " variant " << to_string(job.variant) << ": " << job.error << "\n";
      all_agree = false;
      continue;
    }
    const HarnessReport& r = job.report;
    all_agree = all_agree && r.agree;
    if (a.json_output) {
      json row = io::harness_json(r);
      row["input"] = job.input;
      rows.push_back(std::move(row));
    } else {
      out << job.input << " variant=" << to_string(r.variant) << " capacity=" << r.capacity
          << " channel_bound=" << r.channel_bound << " pcs=" << (r.pcs_reachable ? "reachable" : "unreachable")
          << " winner=" << to_string(r.winner) << " agree=" << (r.agree ? "yes" : "NO")
          << " configs=" << r.configs << "\n";
    }
  }
  if (a.json_output)
    out << json{{"results", rows}, {"caveat", std::string(HarnessReport::kCaveat)}}.dump(2) << "\n";
  else
    out << "caveat: " << HarnessReport::kCaveat << "\n";
  return all_agree ? kExitDecided : kExitUndecidable;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Safety games on concurrent programs under SC and TSO", "tsogame"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Decide the winner of a program's game");
  solve_args.add_to(solve_cmd);
  solve_cmd->add_option("--bounded", solve_args.bounded, "Bounded-capacity analysis for group III cells")
      ->each([&](const std::string&) { solve_args.has_bounded = true; });
  solve_cmd->add_option("--dump-strategies", solve_args.dump_dir, "Write strategy_A.json and strategy_B.json here");

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Group of an update policy cell");
  classify_cmd->add_option("policy", classify_args.policy, "e.g. A=before,B=before");
  classify_cmd->add_flag("--all", classify_args.all, "Print all 16 cells");

  GenerateArgs generate_args;
  auto* generate_cmd = app.add_subcommand("generate", "Emit a generated program in the DSL");
  generate_cmd->add_option("kind", generate_args.kind, "atm, pcs-a, pcs-b, pcs-ab or ownership")
      ->required()
      ->check(CLI::IsMember({"atm", "pcs-a", "pcs-b", "pcs-ab", "ownership"}));
  generate_cmd->add_option("input", generate_args.input, "Machine JSON or program file")->required();
  generate_cmd->add_option("--owned", generate_args.owned, "B-owned local states, e.g. P1.q1,P2.r1");

  DotArgs dot_args;
  auto* dot_cmd = app.add_subcommand("export-dot", "Render the reachable game as DOT");
  dot_args.add_to(dot_cmd);
  dot_cmd->add_option("--capacity", dot_args.capacity, "Buffer capacity")->capture_default_str();
  dot_cmd->add_option("--max-depth", dot_args.max_depth, "Leave nodes at this depth unexpanded")
      ->each([&](const std::string&) { dot_args.has_max_depth = true; });

  ReplayArgs replay_args;
  auto* replay_cmd = app.add_subcommand("replay", "Play two strategies against each other");
  replay_args.add_to(replay_cmd);
  replay_cmd->add_option("--capacity", replay_args.capacity, "Replay on the bounded game at this capacity")
      ->each([&](const std::string&) { replay_args.has_capacity = true; });
  replay_cmd->add_option("--strategy-a", replay_args.strategy_a, "Strategy file for A (default: solver's)");
  replay_cmd->add_option("--strategy-b", replay_args.strategy_b, "Strategy file for B (default: solver's)");
  replay_cmd->add_option("--horizon", replay_args.horizon, "Maximum number of moves")->capture_default_str();

  ReachArgs reach_args;
  auto* reach_cmd = app.add_subcommand("reach", "Plain reachability of local states");
  reach_cmd->add_option("mode", reach_args.mode, "sc or tso-bounded")
      ->required()
      ->check(CLI::IsMember({"sc", "tso-bounded"}));
  reach_cmd->add_option("program", reach_args.program, "Program file")->required();
  reach_cmd->add_option("--target", reach_args.target, "e.g. P1.q3&P2.r3|P2.r2 (default: the finals)");
  reach_cmd->add_option("--capacity", reach_args.capacity, "Buffer capacity")->capture_default_str();

  HarnessArgs harness_args;
  auto* harness_cmd = app.add_subcommand("harness", "Compare channel reachability with generated game winners");
  harness_cmd->add_option("inputs", harness_args.inputs, "Channel system JSON files")->required();
  harness_cmd->add_option("--variant", harness_args.variant, "A, B, AB or all")
      ->check(CLI::IsMember({"A", "B", "AB", "all"}))
      ->capture_default_str();
  harness_cmd->add_option("--capacity", harness_args.capacity, "Buffer capacity")->capture_default_str();
  harness_cmd->add_option("--max-nodes", harness_args.max_nodes, "Size guard")->capture_default_str();
  harness_cmd->add_option("--jobs", harness_args.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  harness_cmd->add_flag("--json", harness_args.json_output, "JSON output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitDecided : kExitInputError;
  }

  auto t0 = std::chrono::steady_clock::now();
  int code = kExitInputError;
  try {
    if (*solve_cmd) code = cmd_solve(solve_args, out);
    else if (*classify_cmd) code = cmd_classify(classify_args, out);
    else if (*generate_cmd) code = cmd_generate(generate_args, out);
    else if (*dot_cmd) code = cmd_export_dot(dot_args, out);
    else if (*replay_cmd) code = cmd_replay(replay_args, out, err);
    else if (*reach_cmd) code = cmd_reach(reach_args, out);
    else if (*harness_cmd) code = cmd_harness(harness_args, out, err);
  } catch (const SizeLimitError& e) {
    err << "error: size limit: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (debug_logging()) {
    err << "debug: " << app.get_subcommands().front()->get_name() << " took "
        << std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() << " ms\n";
  }
  return code;
}

}  // namespace tsogame::cli
