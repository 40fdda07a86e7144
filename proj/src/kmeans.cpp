#include "ipd/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ipd/errors.hpp"
#include "ipd/rng.hpp"

namespace ipd {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

std::size_t distinct_count(const Points& points) {
  return std::set<std::vector<double>>(points.begin(), points.end()).size();
}

Points plus_plus_seeds(const Points& pts, std::size_t k, Rng& rng) {
  Points centers;
  centers.push_back(pts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pts.size()) - 1))]);
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = sq_dist(pts[i], centers[0]);
  while (centers.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      rng.uniform();
    }
    centers.push_back(pts[pick]);
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = std::min(d2[i], sq_dist(pts[i], pts[pick]));
  }
  return centers;
}

KMeansResult lloyd(const Points& pts, Points centers, std::size_t max_iter) {
  const std::size_t k = centers.size(), dim = pts.front().size();
  KMeansResult res;
  res.labels.assign(pts.size(), 0);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[i] != best) changed = true;
      res.labels[i] = best;
    }
    if (!changed) break;
    Points sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ++counts[res.labels[i]];
      for (std::size_t d = 0; d < dim; ++d) sums[res.labels[i]][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its center
      for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
  }
  res.inertia = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) res.inertia += sq_dist(pts[i], centers[res.labels[i]]);
  res.centroids = std::move(centers);
  return res;
}

void canonicalize(KMeansResult& res) {
  std::vector<std::size_t> order(res.centroids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return res.centroids[a] < res.centroids[b]; });
  std::vector<std::size_t> relabel(order.size());
  Points sorted;
  for (std::size_t i = 0; i < order.size(); ++i) {
    relabel[order[i]] = i;
    sorted.push_back(res.centroids[order[i]]);
  }
  for (auto& l : res.labels) l = relabel[l];
  res.centroids = std::move(sorted);
}

}  // namespace

KMeansResult kmeans(const Points& points, std::size_t k, std::uint64_t seed, std::size_t restarts,
                    std::size_t max_iter) {
  if (k < 1 || points.size() < k) throw InsufficientData("k-means needs at least k points", k);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    Rng rng(mix_seed({seed, k, r}));
    KMeansResult res = lloyd(points, plus_plus_seeds(points, k, rng), max_iter);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  canonicalize(best);
  return best;
}

double silhouette(const Points& points, const std::vector<std::size_t>& labels, std::size_t sample_limit,
                  std::uint64_t seed) {
  const std::size_t n = points.size();
  const std::size_t k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sample(n);
  std::iota(sample.begin(), sample.end(), 0);
  if (n > sample_limit) {
    Rng rng(mix_seed({seed, 0x73696cULL}));
    for (std::size_t i = 0; i < sample_limit; ++i) {
      std::swap(sample[i], sample[static_cast<std::size_t>(
                               rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n) - 1))]);
    }
    sample.resize(sample_limit);
  }
  std::vector<std::size_t> sizes(k, 0);
  for (auto l : labels) ++sizes[l];

  double total = 0.0;
  std::vector<double> dist_sum(k);
  for (std::size_t i : sample) {
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) dist_sum[labels[j]] += std::sqrt(sq_dist(points[i], points[j]));
    const std::size_t own = labels[i];
    if (sizes[own] <= 1) continue;  // singleton scores 0
    const double a = dist_sum[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && sizes[c] > 0) b = std::min(b, dist_sum[c] / static_cast<double>(sizes[c]));
    }
    if (!std::isfinite(b)) continue;
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(sample.size());
}

SilhouetteChoice kmeans_silhouette(const Points& points, std::size_t k_min, std::size_t k_max,
                                   std::uint64_t seed, std::size_t restarts) {
  if (k_min < 2 || k_min > k_max) throw ConfigError("k range must satisfy 2 <= k_min <= k_max");
  const std::size_t distinct = distinct_count(points);
  if (distinct < 2) throw InsufficientData("clustering needs distinct points", 2);
  SilhouetteChoice best;
  best.silhouette = -std::numeric_limits<double>::infinity();
  for (std::size_t k = k_min; k <= k_max; ++k) {
    if (k > distinct) continue;
    KMeansResult res = kmeans(points, k, seed, restarts);
    const double s = silhouette(points, res.labels, 4000, seed);
    best.scores.emplace_back(k, s);
    if (s > best.silhouette) {
      best.k = k;
      best.silhouette = s;
      best.clustering = std::move(res);
    }
  }
  return best;
}

}  // namespace ipd
