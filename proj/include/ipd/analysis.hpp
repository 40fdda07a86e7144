#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipd/features.hpp"
#include "ipd/forest.hpp"
#include "ipd/kmeans.hpp"

namespace ipd {

// Approaches 1-3 split on r <= 0.05, 0.25, 0.5; approach 4 is k-means on
// standardized (r, median_score) with k chosen by silhouette.
inline constexpr int kApproachCount = 4;
double approach_threshold(int approach);

// Label 1 iff r <= theta.
std::vector<std::size_t> cluster_threshold(const std::vector<double>& r, double theta);

struct Clustering {
  std::vector<std::size_t> labels;
  std::size_t classes = 2;
  std::optional<std::size_t> chosen_k;
  std::optional<double> silhouette;
};

// Throws ConfigError for approaches outside 1..4, InsufficientData when
// approach 4 has fewer than 2 distinct points.
Clustering cluster_rows(const Dataset& dataset, int approach, std::uint64_t seed = 0,
                        std::size_t k_min = 2, std::size_t k_max = 8);

struct TargetCorrelation {
  std::string feature;
  std::optional<double> with_r;
  std::optional<double> with_score;
  std::size_t pairs = 0;  // rows where the feature is present
};

// Pearson coefficients of each non-boolean applicable feature against r
// and median score, on rows where the feature is present.
std::vector<TargetCorrelation> target_correlations(const Dataset& dataset);

struct CorrelationMatrix {
  std::vector<std::string> names;  // applicable features then r, median_score
  std::vector<std::vector<std::optional<double>>> values;
};

// Pairwise-complete Pearson matrix over every applicable feature and both
// targets.
CorrelationMatrix correlation_matrix(const Dataset& dataset);

struct ImportanceReport {
  std::vector<std::string> features;
  std::vector<double> importances;
  double oob_score = 0.0;
  double holdout_score = 0.0;
  std::size_t train_rows = 0, test_rows = 0;
  std::size_t imputed_cond = 0;
  Clustering clustering;
};

// Forest on the imputed applicable features against the approach labels.
ImportanceReport feature_importance(const Dataset& dataset, int approach, const ForestParams& params = {});

struct Histogram {
  std::string feature;
  double lo = 0.0, width = 0.0;
  std::vector<std::size_t> counts;
};

Histogram histogram(std::string feature, const std::vector<double>& values, double lo, double hi,
                    std::size_t bins);

// Rows with r = 0.
struct WinnerSummary {
  std::vector<double> c_r, c_r_over_mean, c_r_over_median, cc_to_c;
  std::vector<std::string> names;
};
WinnerSummary winners(const Dataset& dataset);

}  // namespace ipd
