#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ipd/action.hpp"
#include "ipd/payoff.hpp"
#include "ipd/player.hpp"
#include "ipd/rng.hpp"

namespace ipd {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr std::size_t kDefaultTurnCap = 10000;

// Match protocol parameters. A fixed-length match sets `turns`; a
// probabilistic-ending match sets `end_probability`; a match with both
// ends at whichever comes first.
struct MatchParams {
  std::optional<std::size_t> turns;
  double noise = 0.0;
  std::optional<double> end_probability;
  std::size_t turn_cap = kDefaultTurnCap;
  // Whether players are told `turns` (ignored when `turns` is absent).
  bool reveal_length = true;

  // Throws ConfigError on inconsistent or out-of-range values.
  void validate() const;

  static MatchParams fixed(std::size_t n, double noise = 0.0);
  static MatchParams probabilistic(double end_probability, double noise = 0.0);
};

struct MatchRecord {
  std::vector<Action> actions_a, actions_b;
  std::vector<Action> intended_a, intended_b;
  std::vector<double> payoffs_a, payoffs_b;
  bool hit_turn_cap = false;

  std::size_t length() const { return actions_a.size(); }
  double total_a() const;
  double total_b() const;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Independent streams used by one match: each side draws its own stochastic
// decisions and noise; `ending` decides probabilistic termination.
struct MatchRngs {
  Rng side_a;
  Rng side_b;
  Rng ending;

  static MatchRngs from_seeds(std::uint64_t a, std::uint64_t b, std::uint64_t ending);
  // Splits three child streams off a parent stream.
  static MatchRngs split(Rng& parent);
};

// Runs one turn: both players decide on the histories so far, each intended
// action is flipped independently with probability `noise`, and the realized
// actions are appended to both histories. Returns {intended, realized} pairs.
struct TurnOutcome {
  Action intended_a, intended_b;
  Action realized_a, realized_b;
};
TurnOutcome play_turn(Player& a, Player& b, History& hist_a, History& hist_b,
                      const MatchContext& ctx, double noise, Rng& rng_a, Rng& rng_b);

MatchRecord play_match(const StrategySpec& a, const StrategySpec& b,
                       const MatchParams& params, const PayoffMatrix& payoffs,
                       MatchRngs& rngs);

MatchRecord play_match_fixed(const StrategySpec& a, const StrategySpec& b,
                             std::size_t turns, double noise, Rng& rng,
                             const PayoffMatrix& payoffs = {});

MatchRecord play_match_probend(const StrategySpec& a, const StrategySpec& b,
                               double end_probability, double noise, Rng& rng,
                               const PayoffMatrix& payoffs = {},
                               std::size_t turn_cap = kDefaultTurnCap);

}  // namespace ipd
