#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipd/trials.hpp"

namespace ipd {

// Text layout of one trial:
//   #trial,seed=7,N=3,k=10,n=134,p_n=0.2,p_e=0.1,turn_cap=10000,engine_version=...,registry_digest=...
//   #roster,<name>,<name>,...
//   then for each protocol:
//   #protocol,standard,cap_hits=0
//   <header row of result columns>
//   <N result rows>
// Fields follow CSV quoting; doubles use the shortest round-trip form and
// absent values are empty fields. Files may hold any number of trials.
void write_trial_csv(std::ostream& out, const TrialRecord& record);
std::string trial_csv(const TrialRecord& record);

nlohmann::json trial_to_json(const TrialRecord& record);
TrialRecord trial_from_json(const nlohmann::json& j);
// One JSON object per line.
void write_trial_jsonl(std::ostream& out, const TrialRecord& record);

struct LoadResult {
  std::vector<TrialRecord> records;
  std::vector<std::string> warnings;
};

// Parses CSV trial blocks or JSON lines (detected from the first
// non-empty character). Throws ParseError with the 1-based line.
// `expected_digest`, when non-empty, turns digest mismatches into warnings,
// as do engine versions other than the current one.
LoadResult parse_records(std::string_view text, const std::string& expected_digest = {});
LoadResult load_records(const std::filesystem::path& path, const std::string& expected_digest = {});
// Loads every *.csv and *.jsonl under `dir` (and `dir/trials`), sorted by
// path. A plain file is loaded directly.
LoadResult load_record_set(const std::filesystem::path& dir, const std::string& expected_digest = {});

// Shortest round-trip decimal form.
std::string format_double(double value);

// Minimal CSV field handling shared by the exporters.
std::string csv_field(std::string_view text);
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace ipd
