#include <doctest.h>

#include <regex>
#include <set>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "test_util.hpp"
#include "tsogame/io.hpp"
#include "tsogame/reductions.hpp"

using namespace tsogame;

namespace {

Pcs load_pcs(const std::string& path) { return io::parse_pcs(io::parse_json_text(testutil::read_file(path))); }

Pcs corpus_pcs(const std::string& name) { return load_pcs(testutil::corpus_path("pcs/" + name + ".json")); }

Pcs make_pcs(std::vector<std::string> states, std::vector<std::string> messages, std::vector<Pcs::Rule> rules,
             std::set<std::uint32_t> finals) {
  Pcs l;
  l.states = std::move(states);
  l.messages = std::move(messages);
  l.rules = std::move(rules);
  l.finals = std::move(finals);
  l.validate();
  return l;
}

std::size_t states_matching(const Process& p, const std::string& pattern) {
  const std::regex re(pattern);
  return std::count_if(p.states.begin(), p.states.end(), [&](const std::string& s) { return std::regex_match(s, re); });
}

// Cycle positions of the helper process: q<k> states plus the per-message group.
std::size_t cycle_positions(const Process& p) {
  return states_matching(p, "q[0-9]+") + (states_matching(p, "qm_.*") > 0 ? 1 : 0);
}

}  // namespace

TEST_SUITE("reductions") {

TEST_CASE("channel steps") {
  Pcs l = make_pcs({"s0", "s1", "sF"}, {"m1", "m2"},
                   {{0, ChannelOp::Send, 0, 1}, {1, ChannelOp::Recv, 0, 2}, {1, ChannelOp::Recv, 1, 2},
                    {0, ChannelOp::Nop, 0, 0}},
                   {2});
  auto from_empty = pcs_successors(l, {0, {}});
  REQUIRE(from_empty.size() == 2);
  CHECK(from_empty[0].second == PcsConfig{1, {0}});
  CHECK(from_empty[1].second == PcsConfig{0, {}});
  CHECK(pcs_successors(l, {1, {}}).empty());
  // m1 is the oldest letter.
  auto fifo = pcs_successors(l, {1, {0, 1}});
  REQUIRE(fifo.size() == 1);
  CHECK(fifo[0].first == 1);
  CHECK(fifo[0].second == PcsConfig{2, {1}});
}

TEST_CASE("bounded channel reachability") {
  Pcs chain = make_pcs({"s0", "s1", "sF"}, {"m"}, {{0, ChannelOp::Send, 0, 1}, {1, ChannelOp::Recv, 0, 2}}, {2});
  PcsReachability r = pcs_reachable_bounded(chain, {0, {}}, chain.finals, 1);
  CHECK(r.reachable);
  CHECK(r.witness == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(pcs_reachable_bounded(chain, {0, {}}, chain.finals, 0).reachable);

  Pcs recv_only = make_pcs({"s0", "sF"}, {"m"}, {{0, ChannelOp::Recv, 0, 1}}, {1});
  for (std::size_t bound : {0, 1, 2, 5}) CHECK_FALSE(pcs_reachable_bounded(recv_only, {0, {}}, recv_only.finals, bound).reachable);

  Pcs two = make_pcs({"s0", "s1", "s2", "s3", "sF"}, {"a", "b"},
                     {{0, ChannelOp::Send, 0, 1}, {1, ChannelOp::Send, 1, 2}, {2, ChannelOp::Recv, 0, 3},
                      {3, ChannelOp::Recv, 1, 4}},
                     {4});
  CHECK_FALSE(pcs_reachable_bounded(two, {0, {}}, two.finals, 1).reachable);
  CHECK(pcs_reachable_bounded(two, {0, {}}, two.finals, 2).reachable);
  CHECK(pcs_reachable_bounded(two, {0, {}}, {0}, 0).witness.empty());
}

TEST_CASE("generated programs match the golden files") {
  Pcs l = load_pcs(testutil::golden_path("mixed_pcs.json"));
  const std::pair<Variant, const char*> cases[] = {
      {Variant::A, "mixed_pcs_a.prog"}, {Variant::B, "mixed_pcs_b.prog"}, {Variant::AB, "mixed_pcs_ab.prog"}};
  for (auto [v, file] : cases) {
    std::string text = print_program(generate_program(l, v));
    CHECK(text == testutil::read_file(testutil::golden_path(file)));
    CHECK(print_program(generate_program(l, v)) == text);
  }
}

TEST_CASE("structure of the A construction") {
  Pcs l = load_pcs(testutil::golden_path("mixed_pcs.json"));
  ProgramSpec s = generate_atso_program(l);
  const Program& p = s.program;
  REQUIRE(p.num_processes() == 3);
  CHECK(s.turn == Player::B);
  CHECK(p.vars == std::vector<std::string>{"x_w", "x_r", "y"});
  CHECK(p.domain == std::vector<std::string>{"a", "b", "0", "1", "bot"});
  CHECK(s.memory == Memory{4, 4, 2});
  const Process& p3 = p.processes[2];
  CHECK(p3.states.size() == 4);
  CHECK(p3.transitions.size() == 5);
  CHECK(std::count_if(p3.transitions.begin(), p3.transitions.end(), [](const Transition& t) { return t.from == t.to; }) ==
        2);
  CHECK(p.processes[1].states.size() == 10 + l.messages.size());
  CHECK(states_matching(p.processes[0], "s2__recv_a__sF__h[0-9]") == 6);
  CHECK(states_matching(p.processes[0], "s1__send_a__s2__h[0-9]") == 1);
  CHECK(states_matching(p.processes[0], "s0__nop__s1__h[0-9]") == 1);
  CHECK(s.finals.size() == l.finals.size() + 2);
}

TEST_CASE("structure of the B and AB constructions") {
  Pcs l = load_pcs(testutil::golden_path("mixed_pcs.json"));
  ProgramSpec b = generate_btso_program(l);
  ProgramSpec ab = generate_abtso_program(l);
  REQUIRE(b.program.num_processes() == 2);
  REQUIRE(ab.program.num_processes() == 2);
  CHECK(b.program.domain.back() == "top");
  CHECK(b.program.processes[0] == ab.program.processes[0]);
  CHECK(cycle_positions(b.program.processes[1]) == 14);
  CHECK(cycle_positions(ab.program.processes[1]) == 12);
  CHECK(b.finals == FinalSet{{1, *b.program.processes[1].find_state("qF")}});
  CHECK(ab.finals == FinalSet{{1, *ab.program.processes[1].find_state("qF")}});

  const Process& p1 = b.program.processes[0];
  // The write-top gadget of the final state and the escapes reading x_r.
  const StateId sF = *p1.find_state("sF");
  CHECK(std::any_of(p1.transitions.begin(), p1.transitions.end(), [&](const Transition& t) {
    return t.from == sF && t.instr.op == Op::Write && t.instr.value == *b.program.find_value("top");
  }));
  const StateId hl = *p1.find_state("hL");
  for (const char* aux : {"s0__nop__s1__h1", "s1__send_a__s2__h1"}) {
    const StateId h = *p1.find_state(aux);
    CHECK(std::count_if(p1.transitions.begin(), p1.transitions.end(), [&](const Transition& t) {
            return t.from == h && t.to == hl && t.instr.op == Op::Read && t.instr.var == 1;
          }) == static_cast<long>(l.messages.size()));
  }
}

TEST_CASE("structural counts on random channel systems") {
  gen::Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    Pcs l = gen::random_pcs(rng, {});
    std::size_t recvs = 0;
    for (const auto& r : l.rules) recvs += r.op == ChannelOp::Recv;
    ProgramSpec a = generate_atso_program(l);
    CHECK(a.program.processes[0].states.size() == l.states.size() + (l.rules.size() - recvs) + 6 * recvs);
    CHECK(a.program.processes[1].states.size() == 10 + l.messages.size());
    CHECK(a.program.processes[2].states.size() == 4);
    ProgramSpec b = generate_btso_program(l);
    ProgramSpec ab = generate_abtso_program(l);
    CHECK(b.program.processes[0] == ab.program.processes[0]);
    CHECK(cycle_positions(b.program.processes[1]) == 14);
    CHECK(cycle_positions(ab.program.processes[1]) == 12);
    for (const ProgramSpec* s : {&a, &b, &ab}) {
      CHECK(parse_program(print_program(*s)) == *s);
      CHECK_NOTHROW(validate_spec(*s));
    }
  }
}

TEST_CASE("the A construction never deadlocks") {
  gen::Rng rng(62);
  ExploreOptions opts;
  opts.max_nodes = 200'000;
  for (int i = 0; i < 15; ++i) {
    Pcs l = gen::random_pcs(rng, {3, 1, 3});
    ProgramSpec s = generate_atso_program(l);
    TsoGame g = build_tso_game_bounded(s.program, s.finals, variant_policy(Variant::A), initial_tso_start(s), 2, opts);
    CHECK(g.deadlocks == 0);
  }
}

TEST_CASE("an initial final state wins for B in the AB construction") {
  Pcs l = make_pcs({"s0"}, {"m"}, {}, {0});
  ProgramSpec s = generate_abtso_program(l);
  const UpdatePolicy pol = variant_policy(Variant::AB);
  TsoGame g = build_tso_game_bounded(s.program, s.finals, pol, initial_tso_start(s), 4);
  CHECK(solve(g.game).winner[0] == Player::B);
  CHECK(oracle::bounded_minimax(s, pol, 4).winner == Player::B);
}

TEST_CASE("variants") {
  CHECK(variant_policy(Variant::A) == UpdatePolicy::parse("A=always,B=never"));
  CHECK(variant_policy(Variant::B) == UpdatePolicy::parse("A=never,B=always"));
  CHECK(variant_policy(Variant::AB) == UpdatePolicy::parse("A=after,B=after"));
  for (Variant v : {Variant::A, Variant::B, Variant::AB}) {
    CHECK(parse_variant(to_string(v)) == v);
    CHECK(classify(variant_policy(v)) == Group::III);
  }
  CHECK_THROWS(parse_variant("C"));
}

TEST_CASE("harness examples") {
  HarnessReport send_recv = reduction_harness(corpus_pcs("send_recv"), Variant::A);
  CHECK(send_recv.channel_bound == 2);
  CHECK(send_recv.pcs_reachable);
  CHECK(send_recv.winner == Player::B);
  CHECK(send_recv.agree);

  HarnessReport recv_only = reduction_harness(corpus_pcs("recv_only"), Variant::B);
  CHECK_FALSE(recv_only.pcs_reachable);
  CHECK(recv_only.winner == Player::A);
  CHECK(recv_only.agree);

  CHECK(reduction_harness(corpus_pcs("nop_cycle_final"), Variant::AB).agree);
  CHECK_THROWS(reduction_harness(corpus_pcs("send_recv"), Variant::A, 1));
}

TEST_CASE("corpus manifest agrees, and the known divergences persist") {
  const auto manifest = io::parse_json_text(testutil::read_file(testutil::corpus_path("pcs/manifest.json")));
  std::size_t runs = 0;
  for (const auto& inst : manifest.at("instances")) {
    Pcs l = corpus_pcs(inst.at("file").get<std::string>().substr(0, inst.at("file").get<std::string>().size() - 5));
    for (const auto& v : inst.at("variants")) {
      HarnessReport r = reduction_harness(l, parse_variant(v.get<std::string>()), manifest.at("capacity"));
      CHECK(r.pcs_reachable == inst.at("reachable").get<bool>());
      CHECK(r.agree);
      ++runs;
    }
  }
  CHECK(runs >= 30);
  for (const auto& d : manifest.at("knownDivergent")) {
    Pcs l = load_pcs(testutil::corpus_path("pcs/" + d.at("file").get<std::string>()));
    HarnessReport r = reduction_harness(l, parse_variant(d.at("variant").get<std::string>()), manifest.at("capacity"));
    CHECK_FALSE(r.pcs_reachable);
    CHECK(r.winner == Player::B);
    CHECK_FALSE(r.agree);
  }
}

}  // TEST_SUITE
