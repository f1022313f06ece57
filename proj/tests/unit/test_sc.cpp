#include <doctest.h>

#include <algorithm>

#include "../support/generators.hpp"
#include "test_util.hpp"
#include "tsogame/sc.hpp"

using namespace tsogame;

namespace {

ScConfig replay(const Program& p, ScConfig c, const std::vector<StepLabel>& steps) {
  for (const auto& step : steps) {
    bool moved = false;
    for (auto& [label, next] : sc_successors(p, c)) {
      if (label == step) {
        c = next;
        moved = true;
        break;
      }
    }
    REQUIRE(moved);
  }
  return c;
}

}  // namespace

TEST_SUITE("sc") {

TEST_CASE("successors of the two-process example") {
  ProgramSpec s = testutil::load_program("write_read");
  ScConfig c0 = initial_sc_config(s);
  auto succ = sc_successors(s.program, c0);
  REQUIRE(succ.size() == 2);
  // write x 1 by P1 and the skip loop of P2; the read is disabled.
  CHECK(succ[0].first == StepLabel{0, 0});
  CHECK(succ[0].second == ScConfig{{1, 0}, {1}});
  CHECK(succ[1].first == StepLabel{1, 0});
  CHECK(succ[1].second == c0);
}

TEST_CASE("arw, fence and stuck processes") {
  ProgramSpec s = parse_program("domain 0 1\nvars x\nprocess P\n  state a init\n  state b\n  state c\n"
                                "  a -> b : arw x 0 1\n  b -> c : fence\nmemory x=0\n");
  auto succ = sc_successors(s.program, initial_sc_config(s));
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].second == ScConfig{{1}, {1}});
  CHECK(sc_successors(s.program, ScConfig{{0}, {1}}).empty());
  auto fenced = sc_successors(s.program, ScConfig{{1}, {1}});
  REQUIRE(fenced.size() == 1);
  CHECK(fenced[0].second == ScConfig{{2}, {1}});
  CHECK(sc_successors(s.program, ScConfig{{2}, {1}}).empty());
}

TEST_CASE("Dekker's critical sections are exclusive") {
  ProgramSpec s = testutil::load_program("dekker");
  auto target = StateTarget::parse(s.program, "P1.q3&P2.r3");
  ScReachability r = sc_reachable(s.program, initial_sc_config(s), target);
  CHECK_FALSE(r.reachable);
  CHECK(r.explored <= sc_state_bound(s.program));
  CHECK(sc_reachable(s.program, initial_sc_config(s), StateTarget::parse(s.program, "P1.q3")).reachable);
}

TEST_CASE("shortest witness for the example's final") {
  ProgramSpec s = testutil::load_program("write_read");
  ScConfig c0 = initial_sc_config(s);
  ScReachability r = sc_reachable(s.program, c0, StateTarget::any_of(s.finals));
  REQUIRE(r.reachable);
  CHECK(r.witness.size() == 2);
  CHECK(replay(s.program, c0, r.witness).states == GlobalState{1, 1});
}

TEST_CASE("target met by the start") {
  ProgramSpec s = testutil::load_program("write_read");
  ScReachability r = sc_reachable(s.program, initial_sc_config(s), StateTarget::parse(s.program, "P1.q1"));
  CHECK(r.reachable);
  CHECK(r.witness.empty());
}

TEST_CASE("target syntax") {
  ProgramSpec s = testutil::load_program("dekker");
  StateTarget t = StateTarget::parse(s.program, "P1.q3&P2.r3|P2.r2");
  REQUIRE(t.clauses().size() == 2);
  CHECK(t.matches(std::vector<StateId>{2, 2}));
  CHECK(t.matches(std::vector<StateId>{0, 1}));
  CHECK_FALSE(t.matches(std::vector<StateId>{2, 0}));
  CHECK_THROWS_AS(StateTarget::parse(s.program, "P1.q3&"), ProgramError);
  CHECK_THROWS_AS(StateTarget::parse(s.program, "P9.q3"), ProgramError);
}

TEST_CASE("witness replay, monotonicity and the state bound on random programs") {
  gen::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    ProgramSpec s = gen::random_program(rng, {});
    const Program& p = s.program;
    ScConfig c0 = initial_sc_config(s);
    StateTarget small = StateTarget::any_of(s.finals);
    ScReachability r = sc_reachable(p, c0, small);
    CHECK(r.explored <= sc_state_bound(p));
    if (r.reachable) CHECK(small.matches(replay(p, c0, r.witness).states));

    FinalSet bigger = s.finals;
    bigger.insert({0, static_cast<StateId>(gen::pick(rng, 0, p.processes[0].states.size() - 1))});
    ScReachability r2 = sc_reachable(p, c0, StateTarget::any_of(bigger));
    if (r.reachable) CHECK(r2.reachable);
    if (r2.reachable) CHECK(r2.witness.size() <= (r.reachable ? r.witness.size() : r2.witness.size()));
  }
}

}  // TEST_SUITE
