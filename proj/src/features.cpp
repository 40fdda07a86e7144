#include "ipd/features.hpp"

#include <algorithm>

#include "ipd/errors.hpp"
#include "ipd/stats.hpp"
#include "ipd/zd.hpp"

namespace ipd {

bool is_boolean(std::size_t feature) { return feature <= idx(Feature::makes_use_of_length); }
bool is_boolean(Feature f) { return is_boolean(idx(f)); }

double memory_usage(std::size_t memory_depth, std::size_t n) {
  if (n == 0) throw ConfigError("memory usage needs n >= 1");
  if (memory_depth == kInfiniteMemory) return 1.0;
  return std::min(static_cast<double>(memory_depth) / static_cast<double>(n), 1.0);
}

std::optional<double> safe_ratio(double num, double den) {
  if (den != 0.0) return num / den;
  if (num == 0.0) return 1.0;
  return std::nullopt;
}

FeatureRow compute_features(const ResultRow& row, const std::vector<ResultRow>& tournament,
                            const TrialParams& params, Protocol protocol,
                            const StrategyMetadata& meta, const PayoffMatrix& payoffs) {
  FeatureRow f;
  f.seed = params.seed;
  f.protocol = protocol;
  f.name = row.name;
  f.r = row.normalized_rank;
  f.median_score = row.median_score;
  auto set = [&](Feature which, std::optional<double> v) { f.values[idx(which)] = v; };

  set(Feature::stochastic, meta.stochastic ? 1.0 : 0.0);
  set(Feature::makes_use_of_game, meta.makes_use_of_game ? 1.0 : 0.0);
  set(Feature::makes_use_of_length, meta.makes_use_of_length ? 1.0 : 0.0);
  if (!is_probend(protocol)) {
    set(Feature::memory_usage, memory_usage(meta.memory_depth, params.n));
    set(Feature::n, static_cast<double>(params.n));
  }
  if (is_noisy(protocol)) set(Feature::p_n, params.p_n);
  if (is_probend(protocol)) set(Feature::p_e, params.p_e);
  set(Feature::N, static_cast<double>(params.N));
  set(Feature::k, static_cast<double>(params.k));

  std::vector<double> rates;
  rates.reserve(tournament.size());
  for (const auto& t : tournament) rates.push_back(t.cooperation_rating);
  const double c_max = *std::max_element(rates.begin(), rates.end());
  const double c_min = *std::min_element(rates.begin(), rates.end());
  const double c_median = median(rates), c_mean = mean(rates);
  const double c_r = row.cooperation_rating;
  set(Feature::c_max, c_max);
  set(Feature::c_min, c_min);
  set(Feature::c_median, c_median);
  set(Feature::c_mean, c_mean);
  set(Feature::c_r, c_r);
  set(Feature::c_r_over_max, safe_ratio(c_r, c_max));
  set(Feature::c_r_over_min, safe_ratio(c_r, c_min));
  set(Feature::c_r_over_median, safe_ratio(c_r, c_median));
  set(Feature::c_r_over_mean, safe_ratio(c_r, c_mean));

  for (std::size_t s = 0; s < 4; ++s) f.values[idx(Feature::cc_to_c) + s] = row.cond_coop[s];
  set(Feature::sse, sse_to_zd(row.cond_coop, payoffs));
  return f;
}

std::vector<std::size_t> applicable_features(std::optional<Protocol> protocol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto f = static_cast<Feature>(i);
    if (protocol) {
      if ((f == Feature::memory_usage || f == Feature::n) && is_probend(*protocol)) continue;
      if (f == Feature::p_n && !is_noisy(*protocol)) continue;
      if (f == Feature::p_e && !is_probend(*protocol)) continue;
    }
    out.push_back(i);
  }
  return out;
}

Dataset build_dataset(const std::vector<const TrialRecord*>& trials, std::optional<Protocol> protocol,
                      const Registry& registry) {
  Dataset ds;
  ds.protocol = protocol;
  for (const TrialRecord* t : trials) {
    for (Protocol p : kProtocols) {
      if (protocol && p != *protocol) continue;
      const auto& rows = t->rows(p);
      for (const auto& row : rows) {
        FeatureRow f = compute_features(row, rows, t->params, p, registry.find(row.name)->metadata());
        if (!protocol) {
          if (!f.values[idx(Feature::p_n)]) f.values[idx(Feature::p_n)] = 0.0;
          if (!f.values[idx(Feature::p_e)]) f.values[idx(Feature::p_e)] = 0.0;
        }
        ds.rows.push_back(std::move(f));
      }
    }
  }
  return ds;
}

ImputedMatrix imputed_matrix(const Dataset& ds, const std::vector<std::size_t>& features,
                             const PayoffMatrix& payoffs) {
  ImputedMatrix out;
  // Per-type means of the conditional rates.
  std::array<std::array<double, 4>, 4> sums{}, counts{};
  for (const auto& r : ds.rows) {
    const auto p = static_cast<std::size_t>(r.protocol);
    for (std::size_t s = 0; s < 4; ++s) {
      if (const auto& v = r.values[idx(Feature::cc_to_c) + s]) {
        sums[p][s] += *v;
        counts[p][s] += 1.0;
      }
    }
  }

  std::vector<std::array<std::optional<double>, kFeatureCount>> filled;
  filled.reserve(ds.rows.size());
  for (const auto& r : ds.rows) {
    auto v = r.values;
    const auto p = static_cast<std::size_t>(r.protocol);
    bool changed = false;
    for (std::size_t s = 0; s < 4; ++s) {
      auto& c = v[idx(Feature::cc_to_c) + s];
      if (!c) {
        // A state never seen anywhere in the type has no mean; 0.5 is neutral.
        c = counts[p][s] > 0 ? sums[p][s] / counts[p][s] : 0.5;
        ++out.imputed_cond;
        changed = true;
      }
    }
    if (changed) {
      v[idx(Feature::sse)] = sse_to_zd(MemoryOneVector{*v[idx(Feature::cc_to_c)], *v[idx(Feature::cd_to_c)],
                                                       *v[idx(Feature::dc_to_c)], *v[idx(Feature::dd_to_c)]},
                                       payoffs);
    }
    filled.push_back(v);
  }

  std::vector<double> col_mean(features.size(), 0.0);
  for (std::size_t j = 0; j < features.size(); ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : filled) {
      if (const auto& x = v[features[j]]) {
        sum += *x;
        ++n;
      }
    }
    col_mean[j] = n ? sum / static_cast<double>(n) : 0.0;
  }
  out.x.reserve(filled.size());
  for (const auto& v : filled) {
    std::vector<double> row(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
      if (const auto& x = v[features[j]]) {
        row[j] = *x;
      } else {
        row[j] = col_mean[j];
        ++out.imputed_other;
      }
    }
    out.x.push_back(std::move(row));
  }
  return out;
}

}  // namespace ipd
