#ifndef TSOGAME_REDUCTIONS_HPP
#define TSOGAME_REDUCTIONS_HPP

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsogame/program.hpp"
#include "tsogame/tso_game.hpp"

namespace tsogame {

enum class ChannelOp : std::uint8_t { Send, Recv, Nop };

// Perfect channel system: one finite control and one FIFO channel.
struct Pcs {
  struct Rule {
    std::uint32_t from = 0;
    ChannelOp op = ChannelOp::Nop;
    std::uint32_t msg = 0;  // unused for Nop
    std::uint32_t to = 0;
  };

  std::vector<std::string> states;
  std::vector<std::string> messages;
  std::vector<Rule> rules;
  std::set<std::uint32_t> finals;
  std::uint32_t initial = 0;

  void validate() const;
};

struct PcsConfig {
  std::uint32_t state = 0;
  std::vector<std::uint32_t> channel;  // oldest (receive end) first

  friend auto operator<=>(const PcsConfig&, const PcsConfig&) = default;
};

// Pairs of (rule index, successor).
std::vector<std::pair<std::size_t, PcsConfig>> pcs_successors(const Pcs& l, const PcsConfig& c);

struct PcsReachability {
  bool reachable = false;
  std::vector<std::size_t> witness;  // rule indices
  std::size_t explored = 0;
};

// Sends are disabled once the channel holds `bound` messages.
PcsReachability pcs_reachable_bounded(const Pcs& l, const PcsConfig& c0,
                                      const std::set<std::uint32_t>& targets, std::size_t bound);

// Programs over x_w, x_r, y simulating the channel system in a TSO game;
// finals and the B-owned start live in the returned spec.
ProgramSpec generate_atso_program(const Pcs& l);
ProgramSpec generate_btso_program(const Pcs& l);
ProgramSpec generate_abtso_program(const Pcs& l);

enum class Variant : std::uint8_t { A, B, AB };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view s);
UpdatePolicy variant_policy(Variant v) noexcept;
ProgramSpec generate_program(const Pcs& l, Variant v);

inline constexpr std::size_t kHarnessCapacity = 6;

struct HarnessReport {
  Variant variant = Variant::A;
  std::size_t capacity = kHarnessCapacity;
  std::size_t channel_bound = 0;
  bool pcs_reachable = false;
  Player winner = Player::A;
  bool agree = false;
  std::size_t configs = 0;
  double millis = 0;
  static constexpr std::string_view kCaveat =
      "bounded evidence only: neither the channel bound nor the buffer capacity is sound "
      "for the unbounded problems";
};

// Compares bounded channel reachability with the bounded game winner of the
// generated program. The channel bound is (capacity - 2) / 2.
HarnessReport reduction_harness(const Pcs& l, Variant v, std::size_t capacity = kHarnessCapacity,
                                std::size_t max_nodes = 5'000'000);

}  // namespace tsogame

#endif  // TSOGAME_REDUCTIONS_HPP
