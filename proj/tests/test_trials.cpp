#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "ipd/batch.hpp"
#include "ipd/errors.hpp"
#include "ipd/records.hpp"
#include "ipd/trials.hpp"
#include "support.hpp"

using namespace ipd;
using ipd::test::slurp;
using ipd::test::TempDir;

namespace {

ParameterRanges desk() {
  ParameterRanges r;
  r.N = {3, 8};
  r.k = {2, 3};
  r.n = {1, 40};
  return r;
}

BatchConfig small_batch(const std::filesystem::path& out, std::uint64_t first, std::uint64_t last,
                        std::size_t workers) {
  BatchConfig cfg;
  cfg.ranges = desk();
  cfg.seed_first = first;
  cfg.seed_last = last;
  cfg.out_dir = out;
  cfg.workers = workers;
  cfg.turn_cap = 2000;
  return cfg;
}

std::map<std::string, std::string> tree_bytes(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "runs.log") continue;
    out[std::filesystem::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("sampled parameters stay within bounds") {
  const auto& reg = default_registry();
  const ParameterRanges ranges;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto p = sample_trial_params(seed, ranges, reg);
    REQUIRE(p.N >= 3);
    REQUIRE(p.N <= std::min<std::size_t>(195, reg.size()));
    REQUIRE(p.k >= 10);
    REQUIRE(p.k <= 100);
    REQUIRE(p.n >= 1);
    REQUIRE(p.n <= 200);
    REQUIRE(p.p_n >= 0.0);
    REQUIRE(p.p_n <= 1.0);
    REQUIRE(p.p_e > 0.0);
    REQUIRE(p.p_e <= 1.0);
    REQUIRE(p.roster.size() == p.N);
    REQUIRE(std::set<std::string>(p.roster.begin(), p.roster.end()).size() == p.N);
    REQUIRE(p.seed == seed);
  }
}

TEST_CASE("sampling is deterministic and seed keyed") {
  const auto& reg = default_registry();
  CHECK(sample_trial_params(7, {}, reg) == sample_trial_params(7, {}, reg));
  CHECK(sample_trial_params(7, {}, reg) != sample_trial_params(8, {}, reg));
  CHECK(sample_trial_params(7, {}, reg, 1) != sample_trial_params(7, {}, reg, 0));
}

TEST_CASE("degenerate ranges") {
  ParameterRanges r;
  r.N = {5, 5};
  r.k = {10, 10};
  r.p_n = {0.25, 0.25};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = sample_trial_params(seed, r, default_registry());
    CHECK(p.N == 5);
    CHECK(p.k == 10);
    CHECK(p.p_n == 0.25);
  }
}

TEST_CASE("range validation") {
  ParameterRanges r;
  r.N = {10, 5};
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = {};
  r.p_n = {0.0, 1.5};
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = {};
  r.N = {2, 5};
  CHECK_THROWS_AS(r.validate(), ConfigError);
  CHECK(ParameterRanges::from_json(ParameterRanges{}.to_json()) == ParameterRanges{});
  CHECK_THROWS_AS(ParameterRanges::from_json({{"M", {1, 2}}}), ConfigError);
}

TEST_CASE("small registry is a configuration error") {
  const auto tiny = default_registry().subset({"Cooperator", "Defector", "Alternator", "Grudger"});
  ParameterRanges r;
  r.N = {5, 10};
  CHECK_THROWS_AS(sample_trial_params(0, r, tiny), ConfigError);
  r.N = {3, 10};
  CHECK(sample_trial_params(0, r, tiny).N <= 4);
}

TEST_CASE("participation follows the sampling expectation") {
  const auto& reg = default_registry();
  ParameterRanges r;
  r.N = {3, 30};
  const std::size_t seeds = 10000;
  std::map<std::string, std::size_t> counts;
  double mean_n = 0;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto p = sample_trial_params(seed, r, reg);
    mean_n += static_cast<double>(p.N);
    for (const auto& name : p.roster) ++counts[name];
  }
  mean_n /= seeds;
  const double p = (3.0 + 30.0) / 2.0 / static_cast<double>(reg.size());
  const double expected = seeds * p;
  const double sd = std::sqrt(seeds * p * (1 - p));
  CHECK(std::abs(mean_n - 16.5) < 0.3);
  for (const auto& name : reg.names()) {
    CHECK_MESSAGE(std::abs(static_cast<double>(counts[name]) - expected) < 5 * sd, name);
  }
}

TEST_CASE("a trial holds four protocol result sets") {
  const auto rec = run_trial(3, desk(), default_registry(), 2000);
  for (Protocol p : kProtocols) {
    REQUIRE(rec.rows(p).size() == rec.params.N);
    std::set<std::string> names;
    for (const auto& row : rec.rows(p)) names.insert(row.name);
    CHECK(names == std::set<std::string>(rec.params.roster.begin(), rec.params.roster.end()));
  }
  CHECK(rec.registry_digest == default_registry().digest());
  CHECK(rec.engine_version == kEngineVersion);
  CHECK(run_trial(3, desk(), default_registry(), 2000) == rec);
}

TEST_CASE("tournament configs follow the protocol") {
  TrialParams p;
  p.roster = {"Cooperator", "Defector", "Alternator"};
  p.N = 3;
  p.k = 2;
  p.n = 11;
  p.p_n = 0.3;
  p.p_e = 0.2;
  const auto s = tournament_config(p, Protocol::standard);
  CHECK(s.turns == 11u);
  CHECK(s.noise == 0.0);
  CHECK_FALSE(s.end_probability);
  const auto n = tournament_config(p, Protocol::noisy);
  CHECK(n.noise == 0.3);
  CHECK(n.turns == 11u);
  const auto e = tournament_config(p, Protocol::probend);
  CHECK_FALSE(e.turns);
  CHECK(e.end_probability == 0.2);
  CHECK(e.noise == 0.0);
  const auto b = tournament_config(p, Protocol::noisy_probend);
  CHECK(b.noise == 0.3);
  CHECK(b.end_probability == 0.2);
}

TEST_CASE("seed isolation") {
  TempDir dir("isolation");
  run_batch(small_batch(dir.path(), 0, 12, 1), default_registry());
  const auto batch = slurp(trial_path(dir.path(), 7));
  CHECK(batch == trial_csv(run_trial(7, desk(), default_registry(), 2000)));
}

TEST_CASE("batch output is independent of worker count") {
  TempDir one("w1"), many("w3");
  const auto a = run_batch(small_batch(one.path(), 0, 9, 1), default_registry());
  const auto b = run_batch(small_batch(many.path(), 0, 9, 3), default_registry());
  CHECK(a.written == 10);
  CHECK(b.written == 10);
  CHECK(tree_bytes(one.path()) == tree_bytes(many.path()));
  const auto manifest = read_manifest(one.path());
  REQUIRE(manifest);
  CHECK((*manifest)["status"] == "complete");
  CHECK((*manifest)["trials"].size() == 10);
  CHECK((*manifest)["registry_digest"] == default_registry().digest());
}

TEST_CASE("batches resume and refuse a different config") {
  TempDir dir("resume");
  run_batch(small_batch(dir.path(), 0, 4, 1), default_registry());
  const auto first = tree_bytes(dir.path());
  const auto again = run_batch(small_batch(dir.path(), 0, 4, 2), default_registry());
  CHECK(again.written == 0);
  CHECK(again.skipped == 5);
  CHECK(tree_bytes(dir.path()) == first);

  // Extending the span keeps the earlier files.
  const auto more = run_batch(small_batch(dir.path(), 0, 6, 1), default_registry());
  CHECK(more.written == 2);
  CHECK(slurp(trial_path(dir.path(), 3)) == first.at("trials/3.csv"));

  auto other = small_batch(dir.path(), 0, 6, 1);
  other.master_seed = 9;
  CHECK_THROWS_AS(run_batch(other, default_registry()), ConfigError);
}

TEST_CASE("batch config parsing") {
  const auto cfg = BatchConfig::from_json(
      {{"ranges", {{"N", {3, 9}}}}, {"seeds", {5, 8}}, {"workers", 2}, {"strategies", {"Cooperator", "Defector", "Grudger"}}});
  CHECK(cfg.ranges.N == IntRange{3, 9});
  CHECK(cfg.seed_first == 5);
  CHECK(cfg.seed_last == 8);
  CHECK(cfg.strategies.size() == 3);
  auto other = cfg;
  other.workers = 7;
  other.out_dir = "elsewhere";
  CHECK(other.digest() == cfg.digest());
  other.master_seed = 1;
  CHECK(other.digest() != cfg.digest());
  CHECK_THROWS_AS(BatchConfig::from_json({{"sedes", {1, 2}}}), ConfigError);
  CHECK(parse_seed_span("3..9") == std::pair<std::uint64_t, std::uint64_t>{3, 9});
  CHECK(parse_seed_span("4") == std::pair<std::uint64_t, std::uint64_t>{4, 4});
  CHECK_THROWS_AS(parse_seed_span("9..3"), ConfigError);
  CHECK_THROWS_AS(parse_seed_span("x"), ConfigError);
}

TEST_CASE("unknown strategy in a batch names it") {
  TempDir dir("missing");
  auto cfg = small_batch(dir.path(), 0, 0, 1);
  cfg.strategies = {"Cooperator", "Defector", "Ghost Player"};
  try {
    run_batch(cfg, default_registry());
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK(e.name() == "Ghost Player");
  }
}
