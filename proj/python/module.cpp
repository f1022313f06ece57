// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the package wrapper.
#include <chrono>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsogame/io.hpp"
#include "tsogame/reductions.hpp"
#include "tsogame/sc_game.hpp"
#include "tsogame/tso_game.hpp"

namespace py = pybind11;
using namespace tsogame;

namespace {

ProgramSpec load(const std::string& text) {
  ProgramSpec spec = parse_program(text);
  validate_spec(spec);
  return spec;
}

std::string solve_text(const std::string& text, const std::optional<std::string>& policy,
                       const std::string& semantics, std::optional<std::size_t> bounded, std::size_t max_nodes) {
  ProgramSpec spec = load(text);
  ExploreOptions explore;
  explore.max_nodes = max_nodes;
  if (semantics == "sc") {
    py::gil_scoped_release release;
    auto t0 = std::chrono::steady_clock::now();
    ScGame g = build_sc_game(spec.program, spec.finals, initial_sc_config(spec), spec.turn, explore);
    Solution s = solve(g.game);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return io::sc_verdict_json(s.winner[g.initial()], {g.game.size(), g.game.num_edges(), ms}).dump();
  }
  if (semantics != "tso") throw std::invalid_argument("semantics must be sc or tso");
  const UpdatePolicy pol = policy ? UpdatePolicy::parse(*policy) : UpdatePolicy{};
  SolveOptions opts;
  opts.explore = explore;
  opts.bounded_capacity = bounded;
  py::gil_scoped_release release;
  return io::verdict_json(solve(spec.program, spec.finals, initial_tso_start(spec), pol, opts)).dump();
}

std::string reach_text(const std::string& text, const std::string& mode, const std::optional<std::string>& target,
                       std::size_t capacity) {
  ProgramSpec spec = load(text);
  const Program& p = spec.program;
  StateTarget goal = target ? StateTarget::parse(p, *target) : StateTarget::any_of(spec.finals);
  if (mode == "sc") {
    ScReachability r = sc_reachable(p, initial_sc_config(spec), goal);
    return io::json{{"semantics", "sc"},
                    {"reachable", r.reachable},
                    {"explored", r.explored},
                    {"witness", io::sc_witness_json(p, r.witness)}}
        .dump();
  }
  if (mode != "tso-bounded") throw std::invalid_argument("mode must be sc or tso-bounded");
  TsoConfig c0 = initial_tso_config(spec);
  TsoReachability r = tso_reachable_bounded(p, c0, goal, capacity);
  return io::json{{"semantics", "tso"},
                  {"capacity", capacity},
                  {"reachable", r.reachable},
                  {"explored", r.explored},
                  {"witness", io::tso_witness_json(p, c0, r.witness)}}
      .dump();
}

std::string generate_text(const std::string& kind, const std::string& input) {
  if (kind == "atm") {
    io::AtmInput in = io::parse_atm(io::parse_json_text(input));
    return print_program(atm_to_program(in.atm, in.word));
  }
  if (kind != "pcs-a" && kind != "pcs-b" && kind != "pcs-ab")
    throw std::invalid_argument("kind must be atm, pcs-a, pcs-b or pcs-ab");
  const Variant v = parse_variant(kind.substr(4) == "ab" ? "AB" : kind.substr(4) == "a" ? "A" : "B");
  return print_program(generate_program(io::parse_pcs(io::parse_json_text(input)), v));
}

std::string harness_text(const std::string& pcs, const std::string& variant, std::size_t capacity) {
  Pcs l = io::parse_pcs(io::parse_json_text(pcs));
  const Variant v = parse_variant(variant);
  py::gil_scoped_release release;
  io::json row = io::harness_json(reduction_harness(l, v, capacity));
  row["caveat"] = std::string(HarnessReport::kCaveat);
  return row.dump();
}

bool atm_accepts_text(const std::string& input) {
  io::AtmInput in = io::parse_atm(io::parse_json_text(input));
  return atm_accepts(in.atm, in.word);
}

}  // namespace

PYBIND11_MODULE(_tsogame, m) {
  py::register_exception<ProgramError>(m, "ProgramError", PyExc_ValueError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_RuntimeError);

  m.def("format_program", [](const std::string& text) { return print_program(load(text)); }, py::arg("text"));
  m.def("classify", [](const std::string& policy) { return std::string(to_string(classify(UpdatePolicy::parse(policy)))); },
        py::arg("policy"));
  m.def("solve", &solve_text, py::arg("text"), py::arg("policy") = std::nullopt, py::arg("semantics") = "tso",
        py::arg("bounded") = std::nullopt, py::arg("max_nodes") = 20'000'000);
  m.def("reach", &reach_text, py::arg("text"), py::arg("mode") = "sc", py::arg("target") = std::nullopt,
        py::arg("capacity") = 1);
  m.def("generate", &generate_text, py::arg("kind"), py::arg("input"));
  m.def("harness", &harness_text, py::arg("pcs"), py::arg("variant"), py::arg("capacity") = kHarnessCapacity);
  m.def("atm_accepts", &atm_accepts_text, py::arg("input"));
}
