#include "tsogame/tso_game.hpp"

#include <chrono>
#include <stdexcept>

namespace tsogame {

std::string_view to_string(UpdateRight r) noexcept {
  switch (r) {
    case UpdateRight::Never: return "never";
    case UpdateRight::Before: return "before";
    case UpdateRight::After: return "after";
    case UpdateRight::Always: return "always";
  }
  return "?";
}

UpdateRight parse_update_right(std::string_view s) {
  for (UpdateRight r : kAllRights)
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown update right '" + std::string(s) + "'");
}

UpdatePolicy UpdatePolicy::parse(std::string_view text) {
  UpdatePolicy policy;
  bool seen_a = false;
  bool seen_b = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    std::string_view item =
        text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (item.size() < 3 || item[1] != '=')
      throw std::invalid_argument("malformed policy '" + std::string(text) + "', expected A=<right>,B=<right>");
    UpdateRight r = parse_update_right(item.substr(2));
    if (item[0] == 'A' && !seen_a) {
      policy.a = r;
      seen_a = true;
    } else if (item[0] == 'B' && !seen_b) {
      policy.b = r;
      seen_b = true;
    } else {
      throw std::invalid_argument("malformed policy '" + std::string(text) + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (!seen_a || !seen_b)
    throw std::invalid_argument("policy must give rights for both A and B");
  return policy;
}

std::string UpdatePolicy::to_string() const {
  return "A=" + std::string(tsogame::to_string(a)) + ",B=" + std::string(tsogame::to_string(b));
}

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::I: return "I";
    case Group::II: return "II";
    case Group::III: return "III";
    case Group::IV: return "IV";
  }
  return "?";
}

Group classify(UpdatePolicy policy) noexcept {
  const bool a_never = policy.a == UpdateRight::Never;
  const bool b_never = policy.b == UpdateRight::Never;
  if (a_never && b_never) return Group::IV;
  if (a_never != b_never) return Group::III;
  if (policy.a == UpdateRight::Before && policy.b == UpdateRight::Before) return Group::II;
  if (policy.a == UpdateRight::After && policy.b == UpdateRight::After) return Group::III;
  return Group::I;
}

TsoStart initial_tso_start(const ProgramSpec& spec) {
  return {initial_tso_config(spec), spec.turn};
}

namespace {

// Every move of one player: optional update closure, one instruction,
// optional update closure.
template <class Emit>
void tso_moves(const Program& p, const TsoConfig& c, bool pre, bool post, std::size_t capacity,
               Emit&& emit) {
  auto run = [&](const TsoConfig& from, const std::vector<ProcId>& pre_updates) {
    for (auto& [step, mid] : instruction_successors(p, from, capacity)) {
      if (!post) {
        emit(std::move(mid), MoveWitness{pre_updates, step.proc, step.transition, {}});
        continue;
      }
      for (auto& after : up_star(mid))
        emit(std::move(after.config),
             MoveWitness{pre_updates, step.proc, step.transition, std::move(after.updates)});
    }
  };
  if (!pre) {
    run(c, {});
    return;
  }
  for (const auto& before : up_star(c)) run(before.config, before.updates);
}

void check_capacity(const TsoConfig& c, std::size_t capacity) {
  for (const auto& b : c.buffers)
    if (b.size() > capacity) throw ProgramError("initial configuration exceeds the buffer capacity");
}

template <class Build>
GameVerdict decide(UpdatePolicy policy, Build&& build) {
  auto t0 = std::chrono::steady_clock::now();
  auto game = build();
  Solution solution = solve(game.game);
  auto t1 = std::chrono::steady_clock::now();

  GameVerdict v;
  v.policy = policy;
  v.group = classify(policy);
  v.decidable = true;
  v.winner = solution.winner[game.initial()];
  v.stats = {game.game.size(), game.game.num_edges(),
             std::chrono::duration<double, std::milli>(t1 - t0).count()};
  auto solved = std::make_shared<SolvedGame>(SolvedGame{std::move(game), std::move(solution)});
  v.solved = std::move(solved);
  return v;
}

}  // namespace

const Game& SolvedGame::graph() const {
  return std::visit([](const auto& g) -> const Game& { return g.game; }, game);
}

TsoGame build_tso_game_bounded(const Program& p, const FinalSet& finals, UpdatePolicy policy,
                               const TsoStart& c0, std::size_t capacity,
                               const ExploreOptions& opts) {
  check_capacity(c0.config, capacity);
  FinalMask mask(p, finals);
  auto successors = [&](const TsoConfig& c, Player mover, auto&& emit) {
    tso_moves(p, c, policy.before(mover), policy.after(mover), capacity, emit);
  };
  auto is_final = [&](const TsoConfig& c) { return mask.any(c.states); };
  return explore_game(c0.config, c0.turn, successors, is_final, opts);
}

ViewGame build_view_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const ExploreOptions& opts) {
  FinalMask mask(p, finals);
  auto successors = [&](const View& v, Player, auto&& emit) {
    for (auto& [label, next] : view_successors(p, v))
      emit(std::move(next), MoveWitness{{}, label.proc, label.transition, {}});
  };
  auto is_final = [&](const View& v) { return mask.any(v.states); };
  return explore_game(view_of(c0.config), c0.turn, successors, is_final, opts);
}

GroupOneRoles group1_roles(UpdatePolicy policy) {
  if (classify(policy) != Group::I)
    throw std::invalid_argument("policy " + policy.to_string() + " is not in group I");
  // X = A whenever A may update after her move; Y is then the other player.
  if (policy.after(Player::A) && policy.before(Player::B)) return {Player::A, Player::B};
  return {Player::B, Player::A};
}

TsoGame build_group1_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                          UpdatePolicy policy, const ExploreOptions& opts) {
  const GroupOneRoles roles = group1_roles(policy);
  FinalMask mask(p, finals);
  auto successors = [&](const TsoConfig& c, Player mover, auto&& emit) {
    const bool restrict = mover == roles.x;
    tso_moves(p, c, policy.before(mover), policy.after(mover), kUnbounded,
              [&](TsoConfig next, MoveWitness w) {
                if (restrict && next.total_messages() > 1 &&
                    !(c0.turn == roles.y && next == c0.config))
                  return;
                emit(std::move(next), std::move(w));
              });
  };
  auto is_final = [&](const TsoConfig& c) { return mask.any(c.states); };
  return explore_game(c0.config, c0.turn, successors, is_final, opts);
}

std::size_t group2_bound(const TsoConfig& c0) noexcept {
  return std::max<std::size_t>(1, c0.total_messages());
}

TsoGame build_group2_game(const Program& p, const FinalSet& finals, const TsoStart& c0,
                          const ExploreOptions& opts) {
  const std::size_t bound = group2_bound(c0.config);
  FinalMask mask(p, finals);
  auto successors = [&](const TsoConfig& c, Player, auto&& emit) {
    tso_moves(p, c, true, false, kUnbounded, [&](TsoConfig next, MoveWitness w) {
      if (next.total_messages() <= bound) emit(std::move(next), std::move(w));
    });
  };
  auto is_final = [&](const TsoConfig& c) { return mask.any(c.states); };
  return explore_game(c0.config, c0.turn, successors, is_final, opts);
}

GameVerdict solve_group1(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         UpdatePolicy policy, const SolveOptions& opts) {
  group1_roles(policy);
  return decide(policy, [&] { return build_group1_game(p, finals, c0, policy, opts.explore); });
}

GameVerdict solve_group2(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const SolveOptions& opts) {
  UpdatePolicy policy{UpdateRight::Before, UpdateRight::Before};
  return decide(policy, [&] { return build_group2_game(p, finals, c0, opts.explore); });
}

GameVerdict solve_group4(const Program& p, const FinalSet& finals, const TsoStart& c0,
                         const SolveOptions& opts) {
  UpdatePolicy policy{UpdateRight::Never, UpdateRight::Never};
  return decide(policy, [&] { return build_view_game(p, finals, c0, opts.explore); });
}

GameVerdict solve(const Program& p, const FinalSet& finals, const TsoStart& c0,
                  UpdatePolicy policy, const SolveOptions& opts) {
  switch (classify(policy)) {
    case Group::I: return solve_group1(p, finals, c0, policy, opts);
    case Group::II: return solve_group2(p, finals, c0, opts);
    case Group::IV: return solve_group4(p, finals, c0, opts);
    case Group::III: break;
  }
  GameVerdict v;
  v.policy = policy;
  v.group = Group::III;
  v.decidable = false;
  if (opts.bounded_capacity) {
    auto t0 = std::chrono::steady_clock::now();
    TsoGame g = build_tso_game_bounded(p, finals, policy, c0, *opts.bounded_capacity, opts.explore);
    Solution s = solve(g.game);
    auto t1 = std::chrono::steady_clock::now();
    v.bounded = BoundedReport{*opts.bounded_capacity, s.winner[g.initial()], g.game.size(),
                              g.game.num_edges()};
    v.stats = {g.game.size(), g.game.num_edges(),
               std::chrono::duration<double, std::milli>(t1 - t0).count()};
    v.solved = std::make_shared<SolvedGame>(SolvedGame{std::move(g), std::move(s)});
  }
  return v;
}

}  // namespace tsogame
