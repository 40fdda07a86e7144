#pragma once

#include <memory>
#include <utility>

#include "ipd/player.hpp"

namespace ipd::detail {

// Wraps a callable (const MatchView&, Rng&) -> Action as a player.
template <class Rule>
class RulePlayer final : public Player {
 public:
  explicit RulePlayer(Rule rule) : rule_(std::move(rule)) {}
  Action decide(const MatchView& view, Rng& rng) override { return rule_(view, rng); }

 private:
  Rule rule_;
};

template <class Rule>
PlayerFactory stateless(Rule rule) {
  return [rule] { return std::make_unique<RulePlayer<Rule>>(rule); };
}

template <class P, class... Args>
PlayerFactory factory_of(Args... args) {
  return [=] { return std::make_unique<P>(args...); };
}

inline StrategyMetadata deterministic(std::size_t depth) {
  StrategyMetadata m;
  m.memory_depth = depth;
  return m;
}

inline StrategyMetadata stochastic(std::size_t depth) {
  StrategyMetadata m;
  m.stochastic = true;
  m.memory_depth = depth;
  return m;
}

}  // namespace ipd::detail
