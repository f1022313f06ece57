#ifndef TSOGAME_TSO_HPP
#define TSOGAME_TSO_HPP

#include <limits>
#include <utility>
#include <vector>

#include "tsogame/hash.hpp"
#include "tsogame/program.hpp"
#include "tsogame/sc.hpp"

namespace tsogame {

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct BufferEntry {
  VarId var = 0;
  ValueId value = 0;

  friend bool operator==(const BufferEntry&, const BufferEntry&) = default;
};

// Oldest entry at index 0: writes append, updates pop the front.
using Buffer = std::vector<BufferEntry>;

struct TsoConfig {
  GlobalState states;
  std::vector<Buffer> buffers;
  Memory memory;

  static TsoConfig with_empty_buffers(GlobalState states, Memory memory);

  std::size_t total_messages() const noexcept;
  bool buffers_empty() const noexcept;

  friend bool operator==(const TsoConfig&, const TsoConfig&) = default;
};

TsoConfig initial_tso_config(const ProgramSpec& spec);

struct TsoStep {
  enum class Kind : std::uint8_t { Instruction, Update };
  Kind kind = Kind::Instruction;
  ProcId proc = 0;
  std::uint32_t transition = 0;  // meaningful for instructions only

  static TsoStep update(ProcId p) { return {Kind::Update, p, 0}; }
  friend bool operator==(const TsoStep&, const TsoStep&) = default;
};

// Instruction steps only; writes are disabled once the writer's buffer
// holds `capacity` entries.
std::vector<std::pair<TsoStep, TsoConfig>> instruction_successors(
    const Program& p, const TsoConfig& c, std::size_t capacity = kUnbounded);

// Instruction steps followed by one update step per nonempty buffer.
std::vector<std::pair<TsoStep, TsoConfig>> tso_successors(const Program& p, const TsoConfig& c,
                                                          std::size_t capacity = kUnbounded);

// Commits the oldest entry of proc's buffer; the buffer must be nonempty.
TsoConfig apply_update(const TsoConfig& c, ProcId proc);

struct UpdatedConfig {
  TsoConfig config;
  std::vector<ProcId> updates;  // shortest witness sequence
};

// Reflexive closure under updates, breadth-first (c itself comes first).
std::vector<UpdatedConfig> up_star(const TsoConfig& c);

// Members of up_star(c) whose buffers are all empty.
std::vector<UpdatedConfig> flush_all(const TsoConfig& c);

struct TsoReachability {
  bool reachable = false;
  std::vector<TsoStep> witness;
  std::size_t explored = 0;
};

TsoReachability tso_reachable_bounded(const Program& p, const TsoConfig& c0,
                                      const StateTarget& target, std::size_t capacity);

// Abstraction used when nobody may update: what each process would read,
// whether it may fence and whether it has a pending write per variable.
struct View {
  GlobalState states;
  std::size_t num_vars = 0;
  std::vector<ValueId> values;         // [proc * num_vars + var]
  std::vector<std::uint8_t> fencable;  // [proc]
  std::vector<std::uint8_t> buffered;  // [proc * num_vars + var]

  ValueId value(ProcId proc, VarId var) const { return values[proc * num_vars + var]; }
  bool is_buffered(ProcId proc, VarId var) const { return buffered[proc * num_vars + var] != 0; }

  friend bool operator==(const View&, const View&) = default;
};

View view_of(const TsoConfig& c);

std::vector<std::pair<StepLabel, View>> view_successors(const Program& p, const View& v);

}  // namespace tsogame

template <>
struct std::hash<tsogame::TsoConfig> {
  std::size_t operator()(const tsogame::TsoConfig& c) const noexcept {
    std::size_t h = 0;
    tsogame::detail::hash_range(h, c.states);
    tsogame::detail::hash_range(h, c.memory);
    for (const auto& b : c.buffers) {
      tsogame::detail::hash_combine(h, b.size());
      for (const auto& e : b) tsogame::detail::hash_combine(h, (std::size_t{e.var} << 32) | e.value);
    }
    return h;
  }
};

template <>
struct std::hash<tsogame::View> {
  std::size_t operator()(const tsogame::View& v) const noexcept {
    std::size_t h = 0;
    tsogame::detail::hash_range(h, v.states);
    tsogame::detail::hash_range(h, v.values);
    tsogame::detail::hash_range(h, v.fencable);
    tsogame::detail::hash_range(h, v.buffered);
    return h;
  }
};

#endif  // TSOGAME_TSO_HPP
