#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ipd/analysis.hpp"
#include "ipd/errors.hpp"
#include "ipd/features.hpp"
#include "ipd/stats.hpp"
#include "ipd/trials.hpp"
#include "ipd/zd.hpp"
#include "support.hpp"

using namespace ipd;

namespace {

ResultRow with_cr(std::string name, double c_r, std::size_t rank) {
  ResultRow r;
  r.name = std::move(name);
  r.cooperation_rating = c_r;
  r.rank = rank;
  r.normalized_rank = rank / 2.0;
  r.state_rates = {c_r * c_r, c_r * (1 - c_r), (1 - c_r) * c_r, (1 - c_r) * (1 - c_r)};
  r.cond_coop = {1.0, 0.0, 1.0, 0.0};
  return r;
}

TrialParams params3() {
  TrialParams p;
  p.seed = 1;
  p.N = 3;
  p.k = 10;
  p.n = 134;
  p.p_n = 0.2;
  p.p_e = 0.3;
  p.roster = {"a", "b", "c"};
  return p;
}

const std::vector<TrialRecord>& small_trials() {
  static const std::vector<TrialRecord> trials = [] {
    ParameterRanges r;
    r.N = {4, 10};
    r.k = {2, 3};
    r.n = {5, 60};
    std::vector<TrialRecord> out;
    for (std::uint64_t seed = 0; seed < 40; ++seed) out.push_back(run_trial(seed, r, default_registry(), 2000));
    return out;
  }();
  return trials;
}

Dataset dataset(std::optional<Protocol> p) {
  std::vector<const TrialRecord*> ptrs;
  for (const auto& t : small_trials()) ptrs.push_back(&t);
  return build_dataset(ptrs, p, default_registry());
}

}  // namespace

TEST_CASE("basic statistics") {
  const std::vector<double> odd{3, 1, 2}, even{4, 1, 3, 2};
  CHECK(median(odd) == 2.0);
  CHECK(median(even) == 2.5);
  CHECK_THROWS_AS(median(std::vector<double>{}), InsufficientData);
  CHECK(mean(even) == 2.5);
  CHECK(stddev(std::vector<double>{1, 3}) == 1.0);
}

TEST_CASE("pearson") {
  const std::vector<double> x{1, 2, 3, 4, 5.5};
  std::vector<double> neg, lin;
  for (double v : x) {
    neg.push_back(-v);
    lin.push_back(2 * v + 1);
  }
  CHECK(*pearson(x, x) == doctest::Approx(1.0));
  CHECK(*pearson(x, neg) == doctest::Approx(-1.0));
  CHECK(*pearson(x, lin) == doctest::Approx(1.0));
  CHECK_FALSE(pearson(x, std::vector<double>(5, 2.0)).has_value());
  CHECK_FALSE(pearson(std::vector<double>{1, 2}, std::vector<double>{2, 1}).has_value());
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> a(10), b(10);
    for (auto& v : a) v = rng.uniform();
    for (auto& v : b) v = rng.uniform();
    const auto c = pearson(a, b);
    REQUIRE(c);
    CHECK(std::abs(*c) <= 1.0);
  }
}

TEST_CASE("memory usage") {
  CHECK(memory_usage(16, 134) == doctest::Approx(0.119).epsilon(0.005));
  CHECK(std::abs(memory_usage(16, 134) - 0.119) < 0.001);
  CHECK(memory_usage(kInfiniteMemory, 10) == 1.0);
  CHECK(memory_usage(300, 10) == 1.0);
  CHECK(memory_usage(0, 10) == 0.0);
}

TEST_CASE("ratio rule") {
  CHECK(*safe_ratio(0.0, 0.0) == 1.0);
  CHECK_FALSE(safe_ratio(0.3, 0.0).has_value());
  CHECK(*safe_ratio(0.25, 0.5) == 0.5);
}

TEST_CASE("tournament cooperation statistics") {
  const std::vector<ResultRow> t = {with_cr("a", 0.8, 0), with_cr("b", 0.5, 1), with_cr("c", 0.2, 2)};
  const auto p = params3();
  StrategyMetadata meta;
  meta.memory_depth = 16;
  const auto f = compute_features(t[0], t, p, Protocol::noisy, meta);
  CHECK(*f.values[idx(Feature::c_mean)] == doctest::Approx(0.5));
  CHECK(*f.values[idx(Feature::c_median)] == doctest::Approx(0.5));
  CHECK(*f.values[idx(Feature::c_max)] == doctest::Approx(0.8));
  CHECK(*f.values[idx(Feature::c_min)] == doctest::Approx(0.2));
  CHECK(*f.values[idx(Feature::c_r_over_max)] == doctest::Approx(1.0));
  CHECK(*f.values[idx(Feature::c_r_over_min)] == doctest::Approx(4.0));
  CHECK(*f.values[idx(Feature::memory_usage)] == doctest::Approx(16.0 / 134));
  CHECK(*f.values[idx(Feature::p_n)] == 0.2);
  CHECK_FALSE(f.values[idx(Feature::p_e)].has_value());
  CHECK(*f.values[idx(Feature::n)] == 134);
  CHECK(*f.values[idx(Feature::N)] == 3);
  CHECK(*f.values[idx(Feature::k)] == 10);
  CHECK(*f.values[idx(Feature::stochastic)] == 0.0);
  CHECK(f.r == 0.0);
  REQUIRE(f.values[idx(Feature::sse)].has_value());
  // (1, 0, 1, 0) is Tit For Tat; extortion lies a fixed distance away.
  CHECK(*f.values[idx(Feature::sse)] == doctest::Approx(sse_to_zd(MemoryOneVector{1, 0, 1, 0})));

  const auto pe = compute_features(t[1], t, p, Protocol::probend, meta);
  CHECK_FALSE(pe.values[idx(Feature::memory_usage)].has_value());
  CHECK_FALSE(pe.values[idx(Feature::n)].has_value());
  CHECK_FALSE(pe.values[idx(Feature::p_n)].has_value());
  CHECK(*pe.values[idx(Feature::p_e)] == 0.3);
}

TEST_CASE("zero minimum cooperation") {
  std::vector<ResultRow> t = {with_cr("a", 0.6, 0), with_cr("b", 0.0, 1), with_cr("c", 0.0, 2)};
  const auto p = params3();
  const auto top = compute_features(t[0], t, p, Protocol::standard, {});
  CHECK_FALSE(top.values[idx(Feature::c_r_over_min)].has_value());
  const auto bottom = compute_features(t[1], t, p, Protocol::standard, {});
  CHECK(*bottom.values[idx(Feature::c_r_over_min)] == 1.0);
  t[1].cond_coop[2].reset();
  CHECK_FALSE(compute_features(t[1], t, p, Protocol::standard, {}).values[idx(Feature::sse)].has_value());
}

TEST_CASE("threshold clustering") {
  CHECK(approach_threshold(1) == 0.05);
  CHECK(approach_threshold(2) == 0.25);
  CHECK(approach_threshold(3) == 0.5);
  CHECK_THROWS_AS(approach_threshold(5), ConfigError);
  for (double theta : {0.05, 0.25, 0.5}) CHECK(cluster_threshold({0.0}, theta)[0] == 1);
  CHECK(cluster_threshold({0.3}, 0.25)[0] == 0);

  Rng rng(3);
  std::vector<double> r(10000);
  for (auto& v : r) v = rng.uniform();
  const auto labels = cluster_threshold(r, 0.5);
  const auto top = static_cast<double>(std::count(labels.begin(), labels.end(), 1u));
  CHECK(std::abs(top / 10000 - 0.5) < 0.02);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(labels[i] == (r[i] <= 0.5 ? 1u : 0u));
    CHECK((labels[i] == 1) != (r[i] > 0.5));
  }
}

TEST_CASE("dataset construction") {
  const auto ds = dataset(Protocol::standard);
  std::size_t expected = 0;
  for (const auto& t : small_trials()) expected += t.params.N;
  CHECK(ds.rows.size() == expected);
  const auto pooled = dataset(std::nullopt);
  CHECK(pooled.rows.size() == 4 * expected);
  for (const auto& row : pooled.rows) {
    if (!is_noisy(row.protocol)) CHECK(*row.values[idx(Feature::p_n)] == 0.0);
    if (!is_probend(row.protocol)) CHECK(*row.values[idx(Feature::p_e)] == 0.0);
  }
  const auto app = applicable_features(Protocol::probend);
  CHECK(std::find(app.begin(), app.end(), idx(Feature::memory_usage)) == app.end());
  CHECK(std::find(app.begin(), app.end(), idx(Feature::p_e)) != app.end());
}

TEST_CASE("approach labels follow a counting oracle") {
  const auto ds = dataset(Protocol::noisy);
  for (int approach = 1; approach <= 3; ++approach) {
    const auto c = cluster_rows(ds, approach);
    const double theta = approach_threshold(approach);
    for (std::size_t i = 0; i < ds.rows.size(); ++i) CHECK(c.labels[i] == (ds.rows[i].r <= theta ? 1u : 0u));
    CHECK_FALSE(c.chosen_k.has_value());
  }
  const auto four = cluster_rows(ds, 4, 1);
  REQUIRE(four.chosen_k.has_value());
  CHECK(*four.chosen_k >= 2);
  CHECK(four.classes == *four.chosen_k);
  CHECK(cluster_rows(ds, 4, 1).labels == four.labels);
  CHECK_THROWS_AS(cluster_rows(ds, 0), ConfigError);
}

TEST_CASE("correlations skip booleans") {
  const auto ds = dataset(Protocol::standard);
  const auto table = target_correlations(ds);
  std::set<std::string> names;
  for (const auto& c : table) {
    names.insert(c.feature);
    if (c.with_r) CHECK(std::abs(*c.with_r) <= 1.0);
  }
  for (const char* b : {"stochastic", "makes_use_of_game", "makes_use_of_length"}) CHECK(names.count(b) == 0);
  CHECK(names.count("C_r") == 1);
  CHECK(names.count("p_e") == 0);
}

TEST_CASE("correlation matrix is symmetric with unit diagonal") {
  const auto m = correlation_matrix(dataset(Protocol::probend));
  const std::size_t n = m.names.size();
  CHECK(m.names[n - 2] == "r");
  CHECK(m.names[n - 1] == "median_score");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.values[i][i]) CHECK(*m.values[i][i] == doctest::Approx(1.0));
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(m.values[i][j].has_value() == m.values[j][i].has_value());
      if (m.values[i][j]) CHECK(*m.values[i][j] == doctest::Approx(*m.values[j][i]));
    }
  }
}

TEST_CASE("imputation fills every gap") {
  const auto ds = dataset(Protocol::probend);
  const auto features = applicable_features(Protocol::probend);
  const auto m = imputed_matrix(ds, features);
  REQUIRE(m.x.size() == ds.rows.size());
  for (const auto& row : m.x) {
    REQUIRE(row.size() == features.size());
    for (double v : row) CHECK(std::isfinite(v));
  }
  std::size_t missing_cond = 0;
  for (const auto& row : ds.rows) {
    for (Feature f : {Feature::cc_to_c, Feature::cd_to_c, Feature::dc_to_c, Feature::dd_to_c}) {
      missing_cond += !row.values[idx(f)].has_value();
    }
  }
  CHECK(m.imputed_cond == missing_cond);
}

TEST_CASE("feature importance report") {
  ForestParams p;
  p.trees = 20;
  const auto report = feature_importance(dataset(Protocol::standard), 2, p);
  CHECK(report.features.size() == report.importances.size());
  double sum = 0;
  for (double v : report.importances) sum += v;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(report.holdout_score >= 0.0);
  CHECK(report.train_rows + report.test_rows == dataset(Protocol::standard).rows.size());
}

TEST_CASE("winners and histograms") {
  const auto ds = dataset(Protocol::probend);
  const auto w = winners(ds);
  CHECK(w.c_r.size() == small_trials().size());
  const auto h = histogram("C_r", w.c_r, 0.0, 1.0, 10);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  CHECK(total == w.c_r.size());
  const auto edge = histogram("x", {0.0, 1.0, 0.5}, 0.0, 1.0, 2);
  CHECK(edge.counts == std::vector<std::size_t>{1, 2});
}
