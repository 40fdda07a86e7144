#include <doctest.h>

#include <random>
#include <set>

#include "ipd/errors.hpp"
#include "ipd/kmeans.hpp"
#include "ipd/stats.hpp"
#include "support.hpp"

using namespace ipd;

namespace {

// Two Gaussian blobs; the first `n` points belong to blob 0.
Points blobs(std::size_t n, double gap, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.3);
  Points out;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double c = i < n ? 0.0 : gap;
    out.push_back({c + noise(gen), c + noise(gen)});
  }
  return out;
}

bool same_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) pairs.insert({a[i], b[i]});
  std::set<std::size_t> la(a.begin(), a.end()), lb(b.begin(), b.end());
  return pairs.size() == la.size() && la.size() == lb.size();
}

}  // namespace

TEST_CASE("two separated blobs give k = 2") {
  const auto pts = blobs(200, 6.0, 1);
  const auto choice = kmeans_silhouette(standardize(pts), 2, 8, 42);
  CHECK(choice.k == 2);
  CHECK(choice.silhouette > 0.7);
  for (std::size_t i = 0; i < 400; ++i) {
    CHECK(choice.clustering.labels[i] == choice.clustering.labels[i < 200 ? 0 : 399]);
  }
  CHECK(choice.clustering.labels[0] != choice.clustering.labels[399]);
  CHECK(choice.scores.size() == 7);
}

TEST_CASE("identical points are degenerate") {
  const Points same(50, {1.0, 2.0});
  CHECK_THROWS_AS(kmeans_silhouette(same, 2, 8, 0), InsufficientData);
}

TEST_CASE("k above the distinct count is skipped") {
  Points pts;
  for (int i = 0; i < 30; ++i) pts.push_back({static_cast<double>(i % 3), 0.0});
  const auto choice = kmeans_silhouette(pts, 2, 8, 0);
  CHECK(choice.k == 3);
  CHECK(choice.scores.size() == 2);
  CHECK(choice.silhouette == doctest::Approx(1.0));
}

TEST_CASE("k-means is deterministic for a seed") {
  const auto pts = blobs(100, 3.0, 2);
  const auto a = kmeans(pts, 3, 9, 1);
  const auto b = kmeans(pts, 3, 9, 1);
  CHECK(a.labels == b.labels);
  CHECK(a.inertia == b.inertia);
  const auto c = kmeans(pts, 3, 9, 10);
  const auto d = kmeans(pts, 3, 9, 10);
  CHECK(c.labels == d.labels);
  CHECK(c.inertia <= a.inertia + 1e-9);
}

TEST_CASE("labels are invariant to affine rescaling after standardization") {
  const auto pts = blobs(150, 4.0, 3);
  Points scaled;
  for (const auto& p : pts) scaled.push_back({3.0 * p[0] - 7.0, 0.01 * p[1] + 100.0});
  const auto a = kmeans_silhouette(standardize(pts), 2, 6, 5);
  const auto b = kmeans_silhouette(standardize(scaled), 2, 6, 5);
  CHECK(a.k == b.k);
  CHECK(same_partition(a.clustering.labels, b.clustering.labels));
}

TEST_CASE("silhouette bounds") {
  const auto pts = blobs(60, 1.0, 4);
  const auto res = kmeans(pts, 4, 0);
  const double s = silhouette(pts, res.labels);
  CHECK(s >= -1.0);
  CHECK(s <= 1.0);
  // Two coincident blobs at distance: silhouette 1.
  Points dup;
  std::vector<std::size_t> labels;
  for (int i = 0; i < 20; ++i) {
    dup.push_back({i < 10 ? 0.0 : 5.0, 0.0});
    labels.push_back(i < 10 ? 0 : 1);
  }
  CHECK(silhouette(dup, labels) == doctest::Approx(1.0));
}

TEST_CASE("subsampled silhouette is close to the full value") {
  const auto pts = blobs(2500, 2.0, 6);
  const auto res = kmeans(pts, 2, 0, 3);
  const double full = silhouette(pts, res.labels, 10000);
  const double sub = silhouette(pts, res.labels, 1500, 1);
  CHECK(std::abs(full - sub) < 0.03);
}
