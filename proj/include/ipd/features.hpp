#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ipd/registry.hpp"
#include "ipd/tournament.hpp"
#include "ipd/trials.hpp"

namespace ipd {

enum class Feature : std::size_t {
  stochastic, makes_use_of_game, makes_use_of_length, memory_usage, sse,
  c_max, c_min, c_median, c_mean, c_r,
  c_r_over_max, c_r_over_min, c_r_over_median, c_r_over_mean,
  cc_to_c, cd_to_c, dc_to_c, dd_to_c,
  p_n, p_e, n, N, k,
};

inline constexpr std::size_t kFeatureCount = 23;

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "stochastic", "makes_use_of_game", "makes_use_of_length", "memory_usage", "SSE",
    "C_max",      "C_min",             "C_median",            "C_mean",       "C_r",
    "C_r/C_max",  "C_r/C_min",         "C_r/C_median",        "C_r/C_mean",   "CC_to_C",
    "CD_to_C",    "DC_to_C",           "DD_to_C",             "p_n",          "p_e",
    "n",          "N",                 "k"};

constexpr std::size_t idx(Feature f) { return static_cast<std::size_t>(f); }
bool is_boolean(Feature f);
bool is_boolean(std::size_t feature);

// memory_depth / n capped at 1; infinite depth gives 1.
double memory_usage(std::size_t memory_depth, std::size_t n);

// Ratio with the zero-denominator rule: 1 when both are zero, missing when
// only the denominator is.
std::optional<double> safe_ratio(double num, double den);

// One strategy's performance in one tournament.
struct FeatureRow {
  std::uint64_t seed = 0;
  Protocol protocol = Protocol::standard;
  std::string name;
  std::array<std::optional<double>, kFeatureCount> values{};
  double r = 0.0;
  double median_score = 0.0;
};

// Features of `row` within its tournament. Inapplicable features are left
// missing: n and memory_usage for probabilistic ending, p_n without noise,
// p_e without probabilistic ending. SSE is missing when any conditional
// rate is.
FeatureRow compute_features(const ResultRow& row, const std::vector<ResultRow>& tournament,
                            const TrialParams& params, Protocol protocol,
                            const StrategyMetadata& meta, const PayoffMatrix& payoffs = {});

// Features that carry information for a tournament type; `nullopt` is the
// pooled set over all four types.
std::vector<std::size_t> applicable_features(std::optional<Protocol> protocol);

struct Dataset {
  std::optional<Protocol> protocol;  // nullopt: pooled over types
  std::vector<FeatureRow> rows;
};

// Feature rows for the given trials. Strategy metadata comes from
// `registry`; unknown names throw LookupError. The pooled set sets p_n and
// p_e to 0 where the type does not use them.
Dataset build_dataset(const std::vector<const TrialRecord*>& trials, std::optional<Protocol> protocol,
                      const Registry& registry);

struct ImputedMatrix {
  std::vector<std::vector<double>> x;  // row-major, columns follow `features`
  std::size_t imputed_cond = 0;        // conditional rates filled by a type mean
  std::size_t imputed_other = 0;
};

// Complete numeric matrix over `features`: conditional rates missing in a
// row take the mean of that tournament type, SSE is recomputed from the
// filled rates and any other gap takes the column mean.
ImputedMatrix imputed_matrix(const Dataset& dataset, const std::vector<std::size_t>& features,
                             const PayoffMatrix& payoffs = {});

}  // namespace ipd
