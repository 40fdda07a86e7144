#include <algorithm>

#include "ipd/errors.hpp"
#include "ipd/strategies.hpp"

namespace ipd {

namespace {

class MetaPlayer final : public Player {
 public:
  MetaPlayer(MetaRule rule, const std::vector<StrategyPtr>& team, bool nice) : rule_(rule), nice_(nice) {
    members_.reserve(team.size());
    for (const auto& spec : team) members_.push_back(Member{spec->instantiate(), {}, 0.0});
  }

  Action decide(const MatchView& v, Rng& rng) override {
    std::size_t cooperators = 0;
    for (auto& m : members_) {
      if (!v.opp.empty()) m.score += payoff(m.proposals.back(), v.opp.back(), v.ctx.payoffs).first;
      m.proposal = m.player->decide(MatchView{m.proposals, v.opp, v.ctx}, rng);
      if (m.proposal == Action::C) ++cooperators;
    }
    for (auto& m : members_) m.proposals.push(m.proposal);

    if (nice_ && v.opp.defections() == 0) return Action::C;
    const std::size_t defectors = members_.size() - cooperators;
    switch (rule_) {
      case MetaRule::majority:
        return cooperators >= defectors ? Action::C : Action::D;
      case MetaRule::minority:
        return cooperators < defectors ? Action::C : Action::D;
      case MetaRule::winner: {
        double best = -1.0;
        Action choice = Action::D;
        for (const auto& m : members_) {
          if (m.score > best || (m.score == best && m.proposal == Action::C)) {
            best = m.score;
            choice = m.proposal;
          }
        }
        return choice;
      }
    }
    return Action::C;
  }

 private:
  struct Member {
    std::unique_ptr<Player> player;
    History proposals;
    double score;
    Action proposal = Action::C;
  };

  MetaRule rule_;
  bool nice_;
  std::vector<Member> members_;
};

}  // namespace

const char* to_string(MetaRule rule) {
  switch (rule) {
    case MetaRule::winner: return "winner";
    case MetaRule::majority: return "majority";
    case MetaRule::minority: return "minority";
  }
  return "unknown";
}

StrategySpec make_meta(std::string name, MetaRule rule, std::vector<StrategyPtr> team, bool nice) {
  if (team.empty()) throw ConfigError("meta strategy " + name + " has an empty team");
  StrategyMetadata meta;
  meta.memory_depth = 0;
  nlohmann::json members = nlohmann::json::array();
  for (const auto& s : team) {
    const auto& m = s->metadata();
    meta.stochastic |= m.stochastic;
    meta.makes_use_of_game |= m.makes_use_of_game;
    meta.makes_use_of_length |= m.makes_use_of_length;
    meta.memory_depth = std::max(meta.memory_depth, m.memory_depth);
    members.push_back(s->name());
  }
  if (rule == MetaRule::winner) {
    meta.makes_use_of_game = true;
    meta.memory_depth = kInfiniteMemory;
  }
  if (nice) meta.memory_depth = kInfiniteMemory;
  nlohmann::json params = {{"rule", to_string(rule)}, {"nice", nice}, {"team", std::move(members)}};
  auto factory = [rule, team = std::move(team), nice] {
    return std::make_unique<MetaPlayer>(rule, team, nice);
  };
  return StrategySpec(std::move(name), ArchetypeKind::meta, std::move(params), meta, std::move(factory));
}

}  // namespace ipd
