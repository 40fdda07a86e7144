#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipd/player.hpp"

namespace ipd {

inline constexpr int kRegistryFormatVersion = 1;

// Immutable, ordered set of named strategies plus name aliases.
class Registry {
 public:
  Registry() = default;
  // Throws ConfigError on duplicate names.
  explicit Registry(std::vector<StrategySpec> specs,
                    std::map<std::string, std::string> aliases = {});

  std::size_t size() const { return strategies_.size(); }
  const std::vector<StrategyPtr>& strategies() const { return strategies_; }
  std::vector<std::string> names() const;
  const std::map<std::string, std::string>& aliases() const { return aliases_; }

  bool contains(std::string_view name) const;
  // Resolves aliases. Throws LookupError for unknown names.
  StrategyPtr find(std::string_view name) const;
  // Keeps the named members in registry order. Throws LookupError.
  Registry subset(const std::vector<std::string>& names) const;

  nlohmann::json manifest() const;
  // Canonical manifest text; the digest is its SHA-256.
  std::string manifest_text() const;
  const std::string& digest() const { return digest_; }

 private:
  std::vector<StrategyPtr> strategies_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::string> aliases_;
  std::string digest_;
};

// The named roster: every builtin plus the four meta strategies, whose
// teams are all non-meta members.
const Registry& default_registry();

nlohmann::json metadata_json(const StrategyMetadata& meta);

}  // namespace ipd
