#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipd/action.hpp"
#include "ipd/payoff.hpp"
#include "ipd/player.hpp"

namespace ipd {

// Conditional cooperation probabilities after each (own, opponent) state,
// in the order CC, CD, DC, DD.
using MemoryOneVector = std::array<double, 4>;

struct MemoryOneParams {
  Action initial = Action::C;
  MemoryOneVector p{};
};

// Memory-one player whose vector is derived from the match payoffs at the
// start of each match (GTFT and the zero-determinant family).
using GameVectorFn = std::function<MemoryOneVector(const PayoffMatrix&)>;

struct FsmTransition {
  int state = 0;
  Action input = Action::C;
  int next_state = 0;
  Action output = Action::C;
};

struct FsmTable {
  int initial_state = 1;
  Action initial_action = Action::C;
  std::vector<FsmTransition> transitions;
};

// Deterministic table keyed on the last `depth` own plays followed by the
// last `depth` opponent plays, e.g. "CD" + "DD" -> "CDDD" for depth 2.
// The first `depth` turns use `initial`.
struct LookupTable {
  std::size_t depth = 1;
  std::vector<Action> initial;
  std::map<std::string, Action> table;
};

// Tabular text formats (see data/README.md):
//   FSM:    "initial_state <s>", "initial_action <C|D>", then rows
//           "<state> <input> <next_state> <output>".
//   Lookup: "depth <d>", "initial <actions>", then rows "<own> <opp> <action>".
// Blank lines and lines starting with '#' are ignored.
FsmTable parse_fsm_table(std::string_view text);
LookupTable parse_lookup_table(std::string_view text);
std::string format_fsm_table(const FsmTable& table);

void validate(const MemoryOneParams& params);
void validate(const FsmTable& table);
void validate(const LookupTable& table);

StrategySpec make_memory_one(std::string name, const MemoryOneParams& params);
StrategySpec make_game_memory_one(std::string name, Action initial, GameVectorFn vector_fn,
                                  bool stochastic, nlohmann::json params);
StrategySpec make_fsm(std::string name, const FsmTable& table);
StrategySpec make_lookup(std::string name, const LookupTable& table);
StrategySpec make_cycler(std::string name, const std::vector<Action>& cycle);
// Cooperation-to-defection ratio player: cooperates on the first turn,
// defects while the opponent has never defected, and otherwise defects when
// (total cooperations / total defections) of both players exceeds `ratio`.
StrategySpec make_threshold_ratio(std::string name, double ratio);

// Known constants for math_constant archetypes: "e", "pi", "phi".
double math_constant(std::string_view which);

// Builds a strategy from an archetype kind and JSON parameters. Every kind
// accepts an optional "name". Throws ValidationError naming the bad field.
//   memory_one:      initial, p_CC, p_CD, p_DC, p_DD
//   fsm:             initial_state, initial_action, transitions [[s,in,next,out],...]
//                    or table (text in the FSM format) or file (path)
//   lookup_table:    depth, initial, table {"<own><opp>": action} or text/file
//   cycler:          cycle
//   math_constant:   constant
//   threshold_ratio: ratio
StrategySpec load_archetype(ArchetypeKind kind, const nlohmann::json& params);
ArchetypeKind parse_archetype_kind(std::string_view text);

}  // namespace ipd
