#include "ipd/player.hpp"

#include "ipd/errors.hpp"

namespace ipd {

const char* to_string(ArchetypeKind kind) {
  switch (kind) {
    case ArchetypeKind::builtin: return "builtin";
    case ArchetypeKind::memory_one: return "memory_one";
    case ArchetypeKind::fsm: return "fsm";
    case ArchetypeKind::lookup_table: return "lookup_table";
    case ArchetypeKind::cycler: return "cycler";
    case ArchetypeKind::math_constant: return "math_constant";
    case ArchetypeKind::threshold_ratio: return "threshold_ratio";
    case ArchetypeKind::meta: return "meta";
  }
  return "unknown";
}

StrategySpec::StrategySpec(std::string name, ArchetypeKind kind, nlohmann::json params,
                           StrategyMetadata metadata, PlayerFactory factory)
    : name_(std::move(name)),
      kind_(kind),
      params_(std::move(params)),
      metadata_(metadata),
      factory_(std::move(factory)),
      behavior_(name_),
      stream_key_(stable_hash(behavior_)) {}

StrategySpec StrategySpec::alias(std::string name) const {
  StrategySpec copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

StrategySpec StrategySpec::renamed(std::string name) const {
  StrategySpec copy = *this;
  copy.name_ = std::move(name);
  copy.behavior_ = copy.name_;
  copy.stream_key_ = stable_hash(copy.behavior_);
  return copy;
}

Action next_action(const StrategySpec& spec, std::span<const Action> own,
                   std::span<const Action> opp, const MatchContext& ctx, Rng& rng) {
  if (own.size() != opp.size()) throw Error("next_action: histories differ in length");
  auto player = spec.instantiate();
  History own_hist, opp_hist;
  MatchContext turn_ctx = ctx;
  Action action = Action::C;
  for (std::size_t t = 0; t <= own.size(); ++t) {
    turn_ctx.current_turn = t + 1;
    action = player->decide(MatchView{own_hist, opp_hist, turn_ctx}, rng);
    if (t < own.size()) {
      own_hist.push(own[t]);
      opp_hist.push(opp[t]);
    }
  }
  return action;
}

}  // namespace ipd
