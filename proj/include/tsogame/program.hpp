#ifndef TSOGAME_PROGRAM_HPP
#define TSOGAME_PROGRAM_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tsogame/player.hpp"

namespace tsogame {

using ProcId = std::uint32_t;
using StateId = std::uint32_t;
using VarId = std::uint32_t;
using ValueId = std::uint32_t;

inline constexpr ProcId kNoProc = static_cast<ProcId>(-1);

enum class Op : std::uint8_t { Read, Write, Arw, Skip, Fence };

struct Instruction {
  Op op = Op::Skip;
  VarId var = 0;
  ValueId value = 0;      // read/write value, expected value for arw
  ValueId new_value = 0;  // arw only

  static constexpr Instruction read(VarId x, ValueId d) { return {Op::Read, x, d, 0}; }
  static constexpr Instruction write(VarId x, ValueId d) { return {Op::Write, x, d, 0}; }
  static constexpr Instruction arw(VarId x, ValueId d, ValueId d2) { return {Op::Arw, x, d, d2}; }
  static constexpr Instruction skip() { return {Op::Skip, 0, 0, 0}; }
  static constexpr Instruction fence() { return {Op::Fence, 0, 0, 0}; }

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct Transition {
  StateId from = 0;
  Instruction instr;
  StateId to = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Process {
  std::string name;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<Transition> transitions;

  std::optional<StateId> find_state(std::string_view s) const;

  friend bool operator==(const Process&, const Process&) = default;
};

// (process, local state) pair; used for finals and for owned states.
struct LocalState {
  ProcId proc = 0;
  StateId state = 0;

  friend auto operator<=>(const LocalState&, const LocalState&) = default;
};

using FinalSet = std::set<LocalState>;
using GlobalState = std::vector<StateId>;
using Memory = std::vector<ValueId>;

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ProgramError {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class Program {
 public:
  std::vector<std::string> domain;
  std::vector<std::string> vars;
  std::vector<Process> processes;

  // Checks every structural invariant and rebuilds the per-state
  // transition index. Must be called after the fields are filled in.
  void validate();
  bool validated() const noexcept { return !outgoing_.empty(); }

  // Indices into processes[proc].transitions leaving `state`.
  std::span<const std::uint32_t> outgoing(ProcId proc, StateId state) const;

  std::optional<VarId> find_var(std::string_view name) const;
  std::optional<ValueId> find_value(std::string_view name) const;
  std::optional<ProcId> find_process(std::string_view name) const;

  std::size_t num_processes() const noexcept { return processes.size(); }
  std::size_t num_vars() const noexcept { return vars.size(); }

  std::string describe(const Instruction& instr) const;
  std::string describe(LocalState ls) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.domain == b.domain && a.vars == b.vars && a.processes == b.processes;
  }

 private:
  std::vector<std::vector<std::vector<std::uint32_t>>> outgoing_;
};

GlobalState initial_states(const Program& p);

// Keeps per-process final flags for constant-time lookups.
class FinalMask {
 public:
  FinalMask() = default;
  FinalMask(const Program& p, const FinalSet& finals);
  bool contains(ProcId proc, StateId state) const { return flags_[proc][state] != 0; }
  bool any(std::span<const StateId> states) const;
  bool empty() const noexcept { return count_ == 0; }

 private:
  std::vector<std::vector<std::uint8_t>> flags_;
  std::size_t count_ = 0;
};

// A parsed program file: the program plus its declared finals, initial
// memory and the player moving first.
struct ProgramSpec {
  Program program;
  FinalSet finals;
  Memory memory;
  Player turn = Player::A;

  friend bool operator==(const ProgramSpec&, const ProgramSpec&) = default;
};

ProgramSpec parse_program(std::string_view text);
std::string print_program(const ProgramSpec& spec);

// Checks memory and finals against the program.
void validate_spec(const ProgramSpec& spec);

// Parses "P1.q3" into a local state of p.
LocalState parse_local_state(const Program& p, std::string_view text);

struct GadgetResult {
  Program program;
  FinalSet extra_finals;
};

// Rewrites every transition leaving a B-owned state so that A must confirm
// it; refusing hands B a shared final sink.
GadgetResult apply_ownership_gadget(const Program& p, const FinalSet& owned);

}  // namespace tsogame

#endif  // TSOGAME_PROGRAM_HPP
