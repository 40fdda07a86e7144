#include <doctest.h>

#include "ipd/errors.hpp"
#include "ipd/records.hpp"
#include "ipd/trials.hpp"
#include "support.hpp"

using namespace ipd;
using ipd::test::spit;
using ipd::test::TempDir;

namespace {

TrialRecord sample(std::uint64_t seed) {
  ParameterRanges r;
  r.N = {3, 7};
  r.k = {2, 3};
  r.n = {1, 30};
  return run_trial(seed, r, default_registry(), 500);
}

}  // namespace

TEST_CASE("csv round trip") {
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const auto rec = sample(seed);
    const auto loaded = parse_records(trial_csv(rec), default_registry().digest());
    REQUIRE(loaded.records.size() == 1);
    CHECK(loaded.records[0] == rec);
    CHECK(loaded.warnings.empty());
  }
}

TEST_CASE("json lines round trip") {
  std::ostringstream out;
  const auto a = sample(4), b = sample(5);
  write_trial_jsonl(out, a);
  write_trial_jsonl(out, b);
  const auto loaded = parse_records(out.str());
  REQUIRE(loaded.records.size() == 2);
  CHECK(loaded.records[0] == a);
  CHECK(loaded.records[1] == b);
  CHECK(trial_from_json(trial_to_json(a)) == a);
}

TEST_CASE("absent conditional rates survive as empty fields") {
  auto rec = sample(6);
  rec.results[0][0].cond_coop[2].reset();
  const auto text = trial_csv(rec);
  CHECK(parse_records(text).records[0] == rec);
}

TEST_CASE("concatenated files load as the union") {
  TempDir dir("concat");
  const auto a = sample(10), b = sample(11), c = sample(12);
  spit(dir / "first.csv", trial_csv(a) + trial_csv(b));
  spit(dir / "second.csv", trial_csv(c));
  const auto set = load_record_set(dir.path());
  REQUIRE(set.records.size() == 3);
  CHECK(set.records[0] == a);
  CHECK(set.records[1] == b);
  CHECK(set.records[2] == c);
  const auto joined = parse_records(trial_csv(a) + trial_csv(c));
  CHECK(joined.records.size() == 2);
}

TEST_CASE("truncated row names the line") {
  const auto text = trial_csv(sample(13));
  // Drop the final two fields of the last row.
  std::string cut = text.substr(0, text.size() - 1);
  cut = cut.substr(0, cut.rfind(','));
  cut = cut.substr(0, cut.rfind(',')) + "\n";
  const auto lines = static_cast<std::size_t>(std::count(cut.begin(), cut.end(), '\n'));
  try {
    parse_records(cut);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == lines);
    CHECK(std::string(e.what()).find("line " + std::to_string(lines)) != std::string::npos);
  }
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse_records("#trial,seed=x\n"), ParseError);
  CHECK_THROWS_AS(parse_records("{not json}\n"), ParseError);
  const auto text = trial_csv(sample(14));
  // A block cut short before its final protocol.
  const auto cut = text.substr(0, text.find("#protocol,noisy_probend"));
  CHECK_THROWS_AS(parse_records(cut), ParseError);
}

TEST_CASE("version and digest mismatches warn") {
  auto rec = sample(15);
  rec.engine_version = "0.9.0";
  auto loaded = parse_records(trial_csv(rec), default_registry().digest());
  CHECK(loaded.records.size() == 1);
  CHECK(loaded.warnings.size() == 1);
  rec.engine_version = kEngineVersion;
  loaded = parse_records(trial_csv(rec), std::string(64, '0'));
  CHECK(loaded.warnings.size() == 1);
}

TEST_CASE("csv field helpers") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(split_csv_line("\"a,b\",c,,\"d\"\"e\"") == std::vector<std::string>{"a,b", "c", "", "d\"e"});
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("load errors carry the path") {
  TempDir dir("badfile");
  spit(dir / "bad.csv", "#trial,seed=1\n");
  CHECK_THROWS_AS(load_records(dir / "bad.csv"), ParseError);
  CHECK_THROWS(load_records(dir / "absent.csv"));
}
