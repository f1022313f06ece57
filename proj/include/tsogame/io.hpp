#ifndef TSOGAME_IO_HPP
#define TSOGAME_IO_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsogame/reductions.hpp"
#include "tsogame/sc_game.hpp"
#include "tsogame/tso_game.hpp"

namespace tsogame::io {

using nlohmann::json;

// Configurations as JSON objects keyed by process/variable names. The
// compact dump of these objects is the canonical node label.
json config_json(const Program& p, const ScConfig& c);
json config_json(const Program& p, const TsoConfig& c);
json config_json(const Program& p, const View& v);

json node_json(const Program& p, const ScGame& g, NodeId n);
json node_json(const Program& p, const TsoGame& g, NodeId n);
json node_json(const Program& p, const ViewGame& g, NodeId n);

template <class Config>
std::vector<std::string> node_labels(const Program& p, const ProgramGame<Config>& g) {
  std::vector<std::string> labels;
  labels.reserve(g.game.size());
  for (NodeId n = 0; n < g.game.size(); ++n) labels.push_back(node_json(p, g, n).dump());
  return labels;
}

// "up P1; P2: read x 1" per edge; requires recorded witnesses.
std::string describe_move(const Program& p, const MoveWitness& w);

template <class Config>
std::vector<std::string> edge_labels(const Program& p, const ProgramGame<Config>& g) {
  std::vector<std::string> labels;
  labels.reserve(g.witnesses.size());
  for (const auto& w : g.witnesses) labels.push_back(describe_move(p, w));
  return labels;
}

json sc_witness_json(const Program& p, const std::vector<StepLabel>& steps);
json tso_witness_json(const Program& p, const TsoConfig& c0, const std::vector<TsoStep>& steps);

json verdict_json(const GameVerdict& v);
json sc_verdict_json(Player winner, const SolveStats& stats);
// One harness row; callers add the input name.
json harness_json(const HarnessReport& r);

struct AtmInput {
  Atm atm;
  AtmWord word;
};

// Throws ProgramError on malformed or ill-typed input.
AtmInput parse_atm(const json& j);
Pcs parse_pcs(const json& j);
json parse_json_text(const std::string& text);

// Strategy files map canonical node labels to canonical successor labels.
json strategy_json(const std::vector<std::string>& labels, const Game& g, const Strategy& s,
                   const std::string& policy);
// Resolves a strategy file against the labels of an explored game; entries
// naming unexplored configurations are ignored.
Strategy load_strategy(const json& j, const std::vector<std::string>& labels);

}  // namespace tsogame::io

#endif  // TSOGAME_IO_HPP
