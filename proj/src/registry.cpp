#include "ipd/registry.hpp"

#include "ipd/digest.hpp"
#include "ipd/engine.hpp"
#include "ipd/errors.hpp"
#include "ipd/strategies.hpp"

namespace ipd {

nlohmann::json metadata_json(const StrategyMetadata& meta) {
  nlohmann::json out = {{"stochastic", meta.stochastic},
                        {"makes_use_of_game", meta.makes_use_of_game},
                        {"makes_use_of_length", meta.makes_use_of_length}};
  if (meta.infinite_memory()) {
    out["memory_depth"] = "inf";
  } else {
    out["memory_depth"] = meta.memory_depth;
  }
  return out;
}

Registry::Registry(std::vector<StrategySpec> specs, std::map<std::string, std::string> aliases)
    : aliases_(std::move(aliases)) {
  for (auto& s : specs) {
    if (index_.contains(s.name())) throw ConfigError("duplicate strategy name: " + s.name());
    index_.emplace(s.name(), strategies_.size());
    strategies_.push_back(std::make_shared<const StrategySpec>(std::move(s)));
  }
  for (const auto& [alias, target] : aliases_) {
    if (index_.contains(alias)) throw ConfigError("alias shadows a strategy: " + alias);
    if (!index_.contains(target)) throw LookupError(target);
  }
  digest_ = sha256_hex(manifest_text());
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  out.reserve(strategies_.size());
  for (const auto& s : strategies_) out.push_back(s->name());
  return out;
}

bool Registry::contains(std::string_view name) const {
  return index_.contains(name) || aliases_.contains(std::string(name));
}

StrategyPtr Registry::find(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return strategies_[it->second];
  if (auto it = aliases_.find(std::string(name)); it != aliases_.end()) {
    return strategies_[index_.find(it->second)->second];
  }
  throw LookupError(std::string(name));
}

Registry Registry::subset(const std::vector<std::string>& names) const {
  std::vector<bool> keep(strategies_.size(), false);
  for (const auto& n : names) {
    const StrategyPtr s = find(n);
    keep[index_.find(s->name())->second] = true;
  }
  std::vector<StrategySpec> specs;
  for (std::size_t i = 0; i < strategies_.size(); ++i) {
    if (keep[i]) specs.push_back(*strategies_[i]);
  }
  std::map<std::string, std::string> aliases;
  for (const auto& [alias, target] : aliases_) {
    if (keep[index_.find(target)->second]) aliases.emplace(alias, target);
  }
  return Registry(std::move(specs), std::move(aliases));
}

nlohmann::json Registry::manifest() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : strategies_) {
    nlohmann::json entry = {{"name", s->name()},
                            {"kind", to_string(s->kind())},
                            {"params", s->params()},
                            {"metadata", metadata_json(s->metadata())}};
    if (s->behavior() != s->name()) entry["same_behavior_as"] = s->behavior();
    list.push_back(std::move(entry));
  }
  return {{"format", "ipdlab-registry"},
          {"format_version", kRegistryFormatVersion},
          {"engine_version", kEngineVersion},
          {"strategy_count", strategies_.size()},
          {"aliases", aliases_},
          {"strategies", std::move(list)}};
}

std::string Registry::manifest_text() const { return manifest().dump(2) + "\n"; }

const Registry& default_registry() {
  static const Registry registry = [] {
    std::vector<StrategySpec> specs = builtin_strategies();
    std::vector<StrategyPtr> team;
    team.reserve(specs.size());
    for (const auto& s : specs) team.push_back(std::make_shared<const StrategySpec>(s));
    specs.push_back(make_meta("Meta Winner", MetaRule::winner, team));
    specs.push_back(make_meta("Meta Majority", MetaRule::majority, team));
    specs.push_back(make_meta("Meta Minority", MetaRule::minority, team));
    specs.push_back(make_meta("Nice Meta Winner", MetaRule::winner, team, true));
    return Registry(std::move(specs), {{"Slow Tit For Two Tats", "Tit For 2 Tats"}});
  }();
  return registry;
}

}  // namespace ipd
