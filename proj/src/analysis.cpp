#include "ipd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ipd/errors.hpp"
#include "ipd/stats.hpp"

namespace ipd {

double approach_threshold(int approach) {
  switch (approach) {
    case 1: return 0.05;
    case 2: return 0.25;
    case 3: return 0.5;
    default: throw ConfigError("threshold approaches are 1, 2 and 3");
  }
}

std::vector<std::size_t> cluster_threshold(const std::vector<double>& r, double theta) {
  std::vector<std::size_t> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] <= theta ? 1 : 0;
  return out;
}

Clustering cluster_rows(const Dataset& ds, int approach, std::uint64_t seed, std::size_t k_min,
                        std::size_t k_max) {
  if (approach < 1 || approach > kApproachCount) throw ConfigError("approach must be 1..4");
  Clustering out;
  if (approach <= 3) {
    std::vector<double> r;
    r.reserve(ds.rows.size());
    for (const auto& row : ds.rows) r.push_back(row.r);
    out.labels = cluster_threshold(r, approach_threshold(approach));
    return out;
  }
  Points pts;
  pts.reserve(ds.rows.size());
  for (const auto& row : ds.rows) pts.push_back({row.r, row.median_score});
  const SilhouetteChoice choice = kmeans_silhouette(standardize(pts), k_min, k_max, seed);
  out.labels = choice.clustering.labels;
  out.classes = choice.k;
  out.chosen_k = choice.k;
  out.silhouette = choice.silhouette;
  return out;
}

std::vector<TargetCorrelation> target_correlations(const Dataset& ds) {
  std::vector<TargetCorrelation> out;
  for (std::size_t f : applicable_features(ds.protocol)) {
    if (is_boolean(f)) continue;
    std::vector<double> x, r, s;
    for (const auto& row : ds.rows) {
      if (!row.values[f]) continue;
      x.push_back(*row.values[f]);
      r.push_back(row.r);
      s.push_back(row.median_score);
    }
    out.push_back({kFeatureNames[f], pearson(x, r), pearson(x, s), x.size()});
  }
  return out;
}

CorrelationMatrix correlation_matrix(const Dataset& ds) {
  const auto feats = applicable_features(ds.protocol);
  const std::size_t m = feats.size() + 2;
  CorrelationMatrix out;
  for (auto f : feats) out.names.push_back(kFeatureNames[f]);
  out.names.push_back("r");
  out.names.push_back("median_score");
  auto value = [&](const FeatureRow& row, std::size_t c) -> std::optional<double> {
    if (c < feats.size()) return row.values[feats[c]];
    return c == feats.size() ? row.r : row.median_score;
  };
  out.values.assign(m, std::vector<std::optional<double>>(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      std::vector<double> xa, xb;
      for (const auto& row : ds.rows) {
        const auto va = value(row, a), vb = value(row, b);
        if (va && vb) {
          xa.push_back(*va);
          xb.push_back(*vb);
        }
      }
      const auto c = pearson(xa, xb);
      out.values[a][b] = c;
      out.values[b][a] = c;
    }
  }
  return out;
}

ImportanceReport feature_importance(const Dataset& ds, int approach, const ForestParams& params) {
  ImportanceReport rep;
  rep.clustering = cluster_rows(ds, approach, params.seed);
  const auto feats = applicable_features(ds.protocol);
  for (auto f : feats) rep.features.push_back(kFeatureNames[f]);
  const ImputedMatrix m = imputed_matrix(ds, feats);
  rep.imputed_cond = m.imputed_cond;
  const ForestEvaluation ev = evaluate_forest(m.x, rep.clustering.labels, params);
  rep.importances = ev.model.importances;
  rep.oob_score = ev.model.oob_score;
  rep.holdout_score = ev.holdout_score;
  rep.train_rows = ev.train_rows;
  rep.test_rows = ev.test_rows;
  return rep;
}

Histogram histogram(std::string feature, const std::vector<double>& values, double lo, double hi,
                    std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw ConfigError("histogram needs bins and hi > lo");
  Histogram h{std::move(feature), lo, (hi - lo) / static_cast<double>(bins), std::vector<std::size_t>(bins, 0)};
  for (double v : values) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((v - lo) / h.width));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

WinnerSummary winners(const Dataset& ds) {
  WinnerSummary w;
  for (const auto& row : ds.rows) {
    if (row.r != 0.0) continue;
    w.names.push_back(row.name);
    w.c_r.push_back(*row.values[idx(Feature::c_r)]);
    if (const auto& v = row.values[idx(Feature::c_r_over_mean)]) w.c_r_over_mean.push_back(*v);
    if (const auto& v = row.values[idx(Feature::c_r_over_median)]) w.c_r_over_median.push_back(*v);
    if (const auto& v = row.values[idx(Feature::cc_to_c)]) w.cc_to_c.push_back(*v);
  }
  return w;
}

}  // namespace ipd
