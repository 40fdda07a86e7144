#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipd/registry.hpp"
#include "ipd/tournament.hpp"

namespace ipd {

struct IntRange {
  std::int64_t lo = 0, hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
  double lo = 0.0, hi = 0.0;
  friend bool operator==(const RealRange&, const RealRange&) = default;
};

// Sampling ranges for one trial. Defaults are the full data-collection
// ranges; N above the registry size is clamped.
struct ParameterRanges {
  IntRange N{3, 195};
  IntRange k{10, 100};
  IntRange n{1, 200};
  RealRange p_n{0.0, 1.0};
  RealRange p_e{0.0, 1.0};

  // Throws ConfigError naming the bad range.
  void validate() const;
  nlohmann::json to_json() const;
  // Missing keys keep their defaults.
  static ParameterRanges from_json(const nlohmann::json& j);

  friend bool operator==(const ParameterRanges&, const ParameterRanges&) = default;
};

struct TrialParams {
  std::uint64_t seed = 0;
  std::size_t N = 0, k = 0, n = 0;
  double p_n = 0.0, p_e = 0.0;
  std::vector<std::string> roster;

  friend bool operator==(const TrialParams&, const TrialParams&) = default;
};

struct TrialRecord {
  TrialParams params;
  std::array<std::vector<ResultRow>, 4> results;  // indexed by Protocol
  std::array<std::size_t, 4> cap_hits{};
  std::size_t turn_cap = kDefaultTurnCap;
  std::string engine_version;
  std::string registry_digest;

  const std::vector<ResultRow>& rows(Protocol p) const {
    return results[static_cast<std::size_t>(p)];
  }

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Draws, in order: N, the roster (N distinct registry members, uniformly),
// k, n, p_n, p_e (p_e = 0 is redrawn). Depends only on (master, seed).
// Throws ConfigError when the registry is smaller than N.lo.
TrialParams sample_trial_params(std::uint64_t seed, const ParameterRanges& ranges,
                                const Registry& registry, std::uint64_t master_seed = 0);

TournamentConfig tournament_config(const TrialParams& params, Protocol protocol,
                                   std::size_t turn_cap = kDefaultTurnCap);

// Runs the four protocols on one sampled roster. Each protocol gets its own
// stream derived from (master, seed, protocol). Tournament errors are
// rethrown with the seed and protocol in the message.
TrialRecord run_trial(std::uint64_t seed, const ParameterRanges& ranges, const Registry& registry,
                      std::size_t turn_cap = kDefaultTurnCap, std::uint64_t master_seed = 0);

}  // namespace ipd
