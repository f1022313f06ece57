#include <doctest.h>

#include <map>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "test_util.hpp"
#include "tsogame/io.hpp"
#include "tsogame/tso_game.hpp"

using namespace tsogame;

namespace {

std::vector<UpdatePolicy> cells_of(Group g) {
  std::vector<UpdatePolicy> out;
  for (auto a : kAllRights)
    for (auto b : kAllRights)
      if (classify({a, b}) == g) out.push_back({a, b});
  return out;
}

ProgramSpec with_arbiter(const ProgramSpec& s) {
  ProgramSpec t = s;
  Process arbiter;
  arbiter.name = "Arbiter";
  arbiter.states = {"rho1", "rho2", "rho3", "rhoF"};
  arbiter.transitions = {{0, Instruction::skip(), 1},
                         {1, Instruction::skip(), 2},
                         {1, Instruction::skip(), 3},
                         {2, Instruction::skip(), 2},
                         {3, Instruction::skip(), 3}};
  t.program.processes.push_back(arbiter);
  t.program.validate();
  t.finals.insert({static_cast<ProcId>(t.program.num_processes() - 1), 3});
  return t;
}

TsoStart start_of(const ProgramSpec& s) { return initial_tso_start(s); }

}  // namespace

TEST_SUITE("tso_game") {

TEST_CASE("group table") {
  using R = UpdateRight;
  // Rows: A's right; columns: B's right, both in the order always, before, after, never.
  const char* expected[4][4] = {{"I", "I", "I", "III"},
                                {"I", "II", "I", "III"},
                                {"I", "I", "III", "III"},
                                {"III", "III", "III", "IV"}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(to_string(classify({kAllRights[i], kAllRights[j]})) == expected[i][j]);
  CHECK(classify({R::Always, R::Always}) == Group::I);
  CHECK(cells_of(Group::I).size() == 7);
  CHECK(cells_of(Group::III).size() == 7);
}

TEST_CASE("policy text") {
  UpdatePolicy p = UpdatePolicy::parse("A=always,B=never");
  CHECK(p.a == UpdateRight::Always);
  CHECK(p.b == UpdateRight::Never);
  CHECK(p.to_string() == "A=always,B=never");
  CHECK(UpdatePolicy::parse("B=after,A=before").to_string() == "A=before,B=after");
  for (const char* bad : {"", "A=always", "A=sometimes,B=never", "A=always;B=never", " A=before , B=after "})
    CHECK_THROWS(UpdatePolicy::parse(bad));
  CHECK(p.before(Player::A));
  CHECK(p.after(Player::A));
  CHECK_FALSE(p.before(Player::B));
}

TEST_CASE("the always/never example fragment") {
  ProgramSpec s = testutil::load_program("write_read");
  ExploreOptions opts;
  opts.record_witnesses = true;
  TsoGame g = build_tso_game_bounded(s.program, s.finals, UpdatePolicy::parse("A=always,B=never"), start_of(s), 1,
                                     opts);
  REQUIRE(g.game.size() == 8);
  REQUIRE(g.game.num_edges() == 15);
  struct Node {
    StateId q, r;
    bool buffered;
    ValueId x;
    Player owner;
  };
  auto id = [&](Node n) {
    TsoConfig c{{n.q, n.r}, {{}, {}}, {n.x}};
    if (n.buffered) c.buffers[0].push_back({0, 1});
    auto found = g.find(c, n.owner);
    REQUIRE(found.has_value());
    return *found;
  };
  const Node a11{0, 0, false, 0, Player::A}, b11{0, 0, false, 0, Player::B};
  const Node a21{1, 0, true, 0, Player::A}, b21{1, 0, true, 0, Player::B};
  const Node a21m{1, 0, false, 1, Player::A}, b21m{1, 0, false, 1, Player::B};
  const Node a22{1, 1, false, 1, Player::A}, b22{1, 1, false, 1, Player::B};
  const std::pair<Node, Node> plain[] = {{a11, b11}, {b11, a11}, {a11, b21}, {b11, a21}, {b21, a21}, {a21, b21},
                                         {b21m, a21m}, {a21m, b21m}, {b21m, a22}, {a21m, b22}, {a22, b22}, {b22, a22}};
  for (const auto& [u, v] : plain) CHECK(g.game.has_edge(id(u), id(v)));
  const std::pair<Node, Node> composed[] = {{a11, b21m}, {a21, b21m}, {a21, b22}};
  for (const auto& [u, v] : composed) CHECK(g.game.has_edge(id(u), id(v)));
  CHECK(g.game.is_final(id(a22)));

  std::map<std::pair<NodeId, NodeId>, std::string> label;
  for (NodeId u = 0; u < g.game.size(); ++u)
    for (std::size_t e = g.game.edge_offset(u); e < g.game.edge_offset(u + 1); ++e)
      label[{u, g.game.successors(u)[e - g.game.edge_offset(u)]}] = io::describe_move(s.program, g.witnesses[e]);
  CHECK(label[{id(a11), id(b21m)}] == "P1: write x 1; up P1");
  CHECK(label[{id(a21), id(b22)}] == "up P1; P2: read x 1");
  CHECK(g.witnesses.size() == g.game.num_edges());
}

TEST_CASE("no update edges without update rights") {
  gen::Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    ProgramSpec s = gen::random_program(rng, {});
    ExploreOptions opts;
    opts.record_witnesses = true;
    TsoGame g = build_tso_game_bounded(s.program, s.finals, {}, start_of(s), 2, opts);
    for (const auto& w : g.witnesses) CHECK(w.updates() == 0);
  }
}

TEST_CASE("capacity zero disables writes") {
  ProgramSpec s = parse_program("domain 0 1\nvars x\nprocess P\n  state a init\n  state b\n  a -> b : write x 1\n"
                                "  b -> b : skip\nfinals P.b\nmemory x=0\n");
  TsoGame g0 = build_tso_game_bounded(s.program, s.finals, {}, start_of(s), 0);
  CHECK(g0.deadlocks == 1);
  CHECK(g0.game.size() == 2);
  CHECK(solve(g0.game).winner[0] == Player::B);
  TsoGame g1 = build_tso_game_bounded(s.program, s.finals, {}, start_of(s), 1);
  CHECK(g1.find(TsoConfig{{1}, {{{0, 1}}}, {0}}, Player::B).has_value());

  TsoStart over{TsoConfig{{0}, {{{0, 1}, {0, 1}}}, {0}}, Player::A};
  CHECK_THROWS_AS(build_tso_game_bounded(s.program, s.finals, {}, over, 1), ProgramError);
}

TEST_CASE("group I on the example") {
  ProgramSpec s = testutil::load_program("write_read");
  const UpdatePolicy always{UpdateRight::Always, UpdateRight::Always};
  GameVerdict v = solve_group1(s.program, s.finals, start_of(s), always);
  REQUIRE(v.winner);
  CHECK(*v.winner == Player::B);
  CHECK(oracle::bounded_minimax(s, always, 2).winner == Player::B);
  CHECK(*solve_group1(s.program, {}, start_of(s), always).winner == Player::A);
  CHECK_THROWS(solve_group1(s.program, s.finals, start_of(s), UpdatePolicy::parse("A=never,B=never")));
  CHECK(group1_roles(always).x == Player::A);
  CHECK(group1_roles(UpdatePolicy::parse("A=before,B=after")).x == Player::B);
}

TEST_CASE("group I matches bounded minimax at capacities 2 to 4") {
  gen::Rng rng(77);
  const auto cells = cells_of(Group::I);
  for (int i = 0; i < 25; ++i) {
    ProgramSpec s = gen::random_program(rng, {});
    for (const auto& pol : cells) {
      Player w = *solve_group1(s.program, s.finals, start_of(s), pol).winner;
      for (std::size_t cap : {2, 3, 4}) CHECK(oracle::bounded_minimax(s, pol, cap).winner == w);
    }
  }
}

TEST_CASE("group II bound") {
  CHECK(group2_bound(TsoConfig{{0}, {{}}, {0}}) == 1);
  CHECK(group2_bound(TsoConfig{{0, 0}, {{{0, 1}, {0, 0}}, {{0, 1}}}, {0}}) == 3);
  ProgramSpec s = testutil::load_program("write_read");
  GameVerdict v = solve(s.program, s.finals, start_of(s), UpdatePolicy::parse("A=before,B=before"));
  CHECK(v.group == Group::II);
  REQUIRE(v.winner);
  CHECK(*v.winner == oracle::bounded_minimax(s, UpdatePolicy::parse("A=before,B=before"), 1).winner);
}

TEST_CASE("group II matches bounded minimax at bound and bound + 1") {
  gen::Rng rng(78);
  const UpdatePolicy bb{UpdateRight::Before, UpdateRight::Before};
  for (int i = 0; i < 100; ++i) {
    ProgramSpec s = gen::random_program(rng, {});
    Player w = *solve_group2(s.program, s.finals, start_of(s)).winner;
    const std::size_t bound = group2_bound(start_of(s).config);
    CHECK(oracle::bounded_minimax(s, bb, bound).winner == w);
    CHECK(oracle::bounded_minimax(s, bb, bound + 1).winner == w);
  }
}

TEST_CASE("group IV") {
  ProgramSpec s = testutil::load_program("write_read");
  GameVerdict v = solve(s.program, s.finals, start_of(s), {});
  CHECK(v.group == Group::IV);
  CHECK(*v.winner == Player::A);
  REQUIRE(v.solved);
  CHECK(v.solved->views() != nullptr);

  ProgramSpec at_final = s;
  at_final.finals = {{1, 0}};
  CHECK(*solve_group4(at_final.program, at_final.finals, start_of(at_final)).winner == Player::B);
}

TEST_CASE("views are bisimilar to the explicit game") {
  gen::Rng rng(79);
  gen::ProgramShape shape;
  shape.allow_arw = false;
  shape.acyclic = true;
  for (int i = 0; i < 40; ++i) {
    ProgramSpec s = gen::random_program(rng, shape);
    const TsoStart c0 = start_of(s);
    TsoGame g = build_tso_game_bounded(s.program, s.finals, {}, c0, kUnbounded);
    ViewGame h = build_view_game(s.program, s.finals, c0);
    std::vector<NodePair> rel;
    for (NodeId u = 0; u < g.game.size(); ++u) {
      if (g.is_sink(u)) {
        for (NodeId v = 0; v < h.game.size(); ++v)
          if (h.kinds[v] == g.kinds[u]) rel.emplace_back(u, v);
        continue;
      }
      auto v = h.find(view_of(g.configs[u]), g.game.owner(u));
      REQUIRE(v.has_value());
      rel.emplace_back(u, *v);
    }
    REQUIRE(check_bisimulation(g.game, h.game, rel).ok);
    Solution sg = solve(g.game), sh = solve(h.game);
    for (auto [u, v] : rel) CHECK(sg.winner[u] == sh.winner[v]);
    CHECK(*solve_group4(s.program, s.finals, c0).winner == sg.winner[0]);
  }
}

TEST_CASE("group III is undecidable unless a bound is asked for") {
  ProgramSpec s = testutil::load_program("write_read");
  GameVerdict v = solve(s.program, s.finals, start_of(s), UpdatePolicy::parse("A=never,B=after"));
  CHECK(v.group == Group::III);
  CHECK_FALSE(v.decidable);
  CHECK_FALSE(v.winner);
  CHECK_FALSE(v.bounded);

  SolveOptions opts;
  opts.bounded_capacity = 2;
  const UpdatePolicy an = UpdatePolicy::parse("A=always,B=never");
  GameVerdict b = solve(s.program, s.finals, start_of(s), an, opts);
  CHECK_FALSE(b.decidable);
  CHECK_FALSE(b.winner);
  REQUIRE(b.bounded);
  CHECK(b.bounded->capacity == 2);
  CHECK(b.bounded->winner == Player::A);
  CHECK(oracle::bounded_minimax(s, an, 2).winner == Player::A);
}

TEST_CASE("deadlock sinks agree with the arbiter process") {
  // The arbiter lets a player pass once it has been entered, so the two only
  // coincide at A-deadlocks and at B-deadlocks off the finals where B cannot
  // update after moving.
  gen::Rng rng(80);
  std::size_t checked = 0;
  for (int i = 0; i < 60; ++i) {
    ProgramSpec s = gen::random_program(rng, {});
    ProgramSpec t = with_arbiter(s);
    FinalMask finals(s.program, s.finals);
    for (const auto& pol : cells_of(Group::III)) {
      TsoGame g = build_tso_game_bounded(s.program, s.finals, pol, start_of(s), 2);
      for (NodeId u = 0; u < g.game.size(); ++u) {
        if (g.is_sink(u) || !g.is_sink(g.game.successors(u)[0])) continue;
        const Player stuck = g.game.owner(u);
        if (stuck == Player::B && (pol.after(Player::B) || finals.any(g.configs[u].states))) continue;
        TsoConfig c = g.configs[u];
        c.states.push_back(0);
        c.buffers.emplace_back();
        TsoGame h = build_tso_game_bounded(t.program, t.finals, pol, TsoStart{c, stuck}, 2);
        CHECK(h.deadlocks == 0);
        CHECK(solve(h.game).winner[0] == opponent(stuck));
        ++checked;
      }
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("the arbiter gives B a parity-changing pass") {
  ProgramSpec s = parse_program("domain 0 1\nvars x\nprocess P1\n  state q0 init\n  state q1\n  q0 -> q1 : skip\n"
                                "  q1 -> q0 : fence\nfinals P1.q1\nmemory x=0\n");
  SolveOptions opts;
  opts.bounded_capacity = 2;
  const UpdatePolicy an = UpdatePolicy::parse("A=always,B=never");
  CHECK(solve(s.program, s.finals, start_of(s), an, opts).bounded->winner == Player::A);
  ProgramSpec t = with_arbiter(s);
  CHECK(solve(t.program, t.finals, start_of(t), an, opts).bounded->winner == Player::B);
}

TEST_CASE("verdicts keep the solved game") {
  ProgramSpec s = testutil::load_program("write_read");
  GameVerdict v = solve(s.program, s.finals, start_of(s), UpdatePolicy::parse("A=always,B=always"));
  REQUIRE(v.solved);
  REQUIRE(v.solved->tso());
  CHECK(v.stats.configs == v.solved->graph().size());
  CHECK(v.stats.edges == v.solved->graph().num_edges());
  CHECK(v.solved->solution.winner[0] == *v.winner);
}

}  // TEST_SUITE
