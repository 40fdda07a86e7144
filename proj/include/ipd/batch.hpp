#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipd/registry.hpp"
#include "ipd/trials.hpp"

namespace ipd {

inline constexpr const char* kConfigEnvVar = "IPDLAB_CONFIG";
inline constexpr const char* kToolVersion = IPDLAB_VERSION;

struct BatchConfig {
  ParameterRanges ranges;
  // Registry subset; empty means the whole registry.
  std::vector<std::string> strategies;
  std::uint64_t seed_first = 0;
  std::uint64_t seed_last = 11420;
  std::uint64_t master_seed = 0;
  std::size_t turn_cap = kDefaultTurnCap;
  std::filesystem::path out_dir = "ipd-out";
  std::size_t workers = 1;

  // Keys: ranges, strategies, seeds [first, last], master_seed, turn_cap,
  // out, workers. Unknown keys are rejected. Throws ConfigError.
  static BatchConfig from_json(const nlohmann::json& j);
  static BatchConfig load(const std::filesystem::path& path);
  // Reproducibility-relevant fields only (no out dir, no worker count).
  nlohmann::json reproducible_json() const;
  std::string digest() const;
  void validate() const;
};

struct BatchOutcome {
  std::size_t written = 0;
  std::size_t skipped = 0;  // already present from an earlier run
  std::size_t cap_hits = 0;
};

// Writes trials/<seed>.csv for every seed in the span, then manifest.json.
// Seeds whose files already exist are kept when the directory's manifest
// was written by the same config; a different config is refused.
// Output bytes depend only on the config, never on worker count.
BatchOutcome run_batch(const BatchConfig& cfg, const Registry& base,
                       const std::function<void(std::uint64_t)>& on_trial = {});

// Path of the trial file for `seed` under `out_dir`.
std::filesystem::path trial_path(const std::filesystem::path& out_dir, std::uint64_t seed);

// Parses "A..B" or "A"; throws ConfigError.
std::pair<std::uint64_t, std::uint64_t> parse_seed_span(const std::string& text);

// Reads manifest.json under `dir` when present.
std::optional<nlohmann::json> read_manifest(const std::filesystem::path& dir);

}  // namespace ipd
