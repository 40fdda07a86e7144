#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipd/action.hpp"
#include "ipd/player.hpp"

namespace ipd {

// Retaliation rule on full histories. A "trick" against a player is a turn
// where that player cooperated and the other defected. Defects when the
// opponent's tricks exceed `threshold` times the focal player's tricks.
// With a `limit`, retaliation starts only on a turn after an opponent
// defection and stops after `limit` consecutive retaliations.
Action retaliate_rule(double threshold, std::optional<std::size_t> limit,
                      std::span<const Action> own, std::span<const Action> opp);

StrategySpec make_retaliate(std::string name, double threshold,
                            std::optional<std::size_t> limit = std::nullopt);

// Every non-meta named strategy, in registry order.
std::vector<StrategySpec> builtin_strategies();

enum class MetaRule { winner, majority, minority };

const char* to_string(MetaRule rule);

// Team strategy. Each turn every member proposes an action against the
// observed opponent history, seeing its own past proposals as its history.
//   winner:   play the proposal of the member with the highest hypothetical
//             cumulative score (ties prefer C)
//   majority: play the most common proposal (ties give C)
//   minority: play the least common proposal (ties give D)
// A `nice` variant never defects before the opponent's first defection.
// Throws ConfigError for an empty team.
StrategySpec make_meta(std::string name, MetaRule rule, std::vector<StrategyPtr> team,
                       bool nice = false);

}  // namespace ipd
