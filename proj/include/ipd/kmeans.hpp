#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ipd {

using Points = std::vector<std::vector<double>>;

struct KMeansResult {
  std::vector<std::size_t> labels;
  Points centroids;
  double inertia = 0.0;
};

// Lloyd's algorithm from k-means++ seeds; the best of `restarts` runs by
// inertia. Labels are renumbered so centroids sort lexicographically.
KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = 10, std::size_t max_iter = 300);

// Mean silhouette coefficient. Above `sample_limit` points the mean is taken
// over a deterministic subsample of that size.
double silhouette(const Points& points, const std::vector<std::size_t>& labels,
                  std::size_t sample_limit = 4000, std::uint64_t seed = 0);

struct SilhouetteChoice {
  std::size_t k = 0;
  double silhouette = 0.0;
  KMeansResult clustering;
  std::vector<std::pair<std::size_t, double>> scores;  // (k, silhouette) per k tried
};

// Clusters for each k in [k_min, k_max] and keeps the best mean silhouette.
// k values above the number of distinct points are skipped. Throws
// InsufficientData when all points coincide or no k is feasible.
SilhouetteChoice kmeans_silhouette(const Points& points, std::size_t k_min, std::size_t k_max,
                                   std::uint64_t seed, std::size_t restarts = 10);

}  // namespace ipd
