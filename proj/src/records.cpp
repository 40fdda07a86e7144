#include "ipd/records.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ipd/errors.hpp"

namespace ipd {

namespace {

constexpr std::array<const char*, 4> kStateNames = {"CC", "CD", "DC", "DD"};

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

double parse_double(std::string_view s, std::size_t line, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, std::size_t line, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> parse_opt(std::string_view s, std::size_t line, std::string_view what) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line, what);
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& fields,
                                              std::size_t first, std::size_t line) {
  std::map<std::string, std::string> out;
  for (std::size_t i = first; i < fields.size(); ++i) {
    const auto eq = fields[i].find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + fields[i] + "'");
    out[fields[i].substr(0, eq)] = fields[i].substr(eq + 1);
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key,
                        std::size_t line) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(line, "missing '" + key + "'");
  return it->second;
}

void check_provenance(const TrialRecord& rec, const std::string& expected_digest,
                      std::vector<std::string>& warnings) {
  const std::string where = "trial " + std::to_string(rec.params.seed);
  if (rec.engine_version != kEngineVersion) {
    warnings.push_back(where + ": engine version " + rec.engine_version + " differs from " +
                       kEngineVersion);
  }
  if (!expected_digest.empty() && rec.registry_digest != expected_digest) {
    warnings.push_back(where + ": registry digest differs from the current registry");
  }
}

class CsvParser {
 public:
  explicit CsvParser(std::string_view text) : text_(text) {}

  LoadResult parse(const std::string& expected_digest) {
    LoadResult out;
    while (next_content_line()) {
      TrialRecord rec = parse_trial();
      check_provenance(rec, expected_digest, out.warnings);
      out.records.push_back(std::move(rec));
    }
    return out;
  }

 private:
  // Advances to the next non-empty line; false at end of input.
  bool next_content_line() {
    while (pos_ < text_.size()) {
      const auto nl = text_.find('\n', pos_);
      const auto end = nl == std::string_view::npos ? text_.size() : nl;
      current_ = text_.substr(pos_, end - pos_);
      if (!current_.empty() && current_.back() == '\r') current_.remove_suffix(1);
      pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
      ++line_;
      if (!current_.empty()) return true;
    }
    return false;
  }

  void require_line(const char* what) {
    if (!next_content_line()) throw ParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
  }

  TrialRecord parse_trial() {
    TrialRecord rec;
    auto fields = split_csv_line(current_);
    if (fields.empty() || fields[0] != "#trial") throw ParseError(line_, "expected '#trial' line");
    const auto kv = key_values(fields, 1, line_);
    rec.params.seed = parse_uint(need(kv, "seed", line_), line_, "seed");
    rec.params.N = parse_uint(need(kv, "N", line_), line_, "N");
    rec.params.k = parse_uint(need(kv, "k", line_), line_, "k");
    rec.params.n = parse_uint(need(kv, "n", line_), line_, "n");
    rec.params.p_n = parse_double(need(kv, "p_n", line_), line_, "p_n");
    rec.params.p_e = parse_double(need(kv, "p_e", line_), line_, "p_e");
    rec.turn_cap = parse_uint(need(kv, "turn_cap", line_), line_, "turn_cap");
    rec.engine_version = need(kv, "engine_version", line_);
    rec.registry_digest = need(kv, "registry_digest", line_);

    require_line("'#roster'");
    fields = split_csv_line(current_);
    if (fields.empty() || fields[0] != "#roster") throw ParseError(line_, "expected '#roster' line");
    rec.params.roster.assign(fields.begin() + 1, fields.end());
    if (rec.params.roster.size() != rec.params.N) {
      throw ParseError(line_, "roster size differs from N");
    }

    for (Protocol protocol : kProtocols) {
      const auto idx = static_cast<std::size_t>(protocol);
      require_line("'#protocol'");
      fields = split_csv_line(current_);
      if (fields.size() < 2 || fields[0] != "#protocol" || fields[1] != to_string(protocol)) {
        throw ParseError(line_, std::string("expected '#protocol,") + to_string(protocol) + "'");
      }
      rec.cap_hits[idx] = parse_uint(need(key_values(fields, 2, line_), "cap_hits", line_), line_, "cap_hits");
      require_line("header row");
      fields = split_csv_line(current_);
      if (!std::equal(fields.begin(), fields.end(), kResultColumns.begin(), kResultColumns.end())) {
        throw ParseError(line_, "unexpected result header");
      }
      for (std::size_t r = 0; r < rec.params.N; ++r) {
        require_line("result row");
        rec.results[idx].push_back(parse_row(split_csv_line(current_)));
      }
    }
    return rec;
  }

  ResultRow parse_row(const std::vector<std::string>& f) {
    if (f.size() != kResultColumns.size()) {
      throw ParseError(line_, "truncated row: expected " + std::to_string(kResultColumns.size()) +
                                  " fields, got " + std::to_string(f.size()));
    }
    if (!f[0].empty() && f[0][0] == '#') throw ParseError(line_, "truncated block");
    ResultRow row;
    row.name = f[0];
    row.rank = parse_uint(f[1], line_, "rank");
    row.normalized_rank = parse_double(f[2], line_, "normalized_rank");
    row.median_score = parse_double(f[3], line_, "median_score");
    row.cooperation_rating = parse_double(f[4], line_, "cooperation_rating");
    row.win = parse_double(f[5], line_, "win");
    row.initial_c = parse_double(f[6], line_, "initial_C");
    for (std::size_t s = 0; s < 4; ++s) row.state_rates[s] = parse_double(f[7 + s], line_, kResultColumns[7 + s]);
    for (std::size_t s = 0; s < 4; ++s) row.cond_coop[s] = parse_opt(f[11 + s], line_, kResultColumns[11 + s]);
    return row;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
  std::string_view current_;
};

nlohmann::json row_to_json(const ResultRow& r) {
  nlohmann::json cond = nlohmann::json::object();
  for (std::size_t s = 0; s < 4; ++s) {
    cond[kStateNames[s]] = r.cond_coop[s] ? nlohmann::json(*r.cond_coop[s]) : nlohmann::json(nullptr);
  }
  return {{"name", r.name},
          {"rank", r.rank},
          {"normalized_rank", r.normalized_rank},
          {"median_score", r.median_score},
          {"cooperation_rating", r.cooperation_rating},
          {"win", r.win},
          {"initial_C", r.initial_c},
          {"state_rates", r.state_rates},
          {"cond_coop", std::move(cond)}};
}

ResultRow row_from_json(const nlohmann::json& j) {
  ResultRow r;
  r.name = j.at("name").get<std::string>();
  r.rank = j.at("rank").get<std::size_t>();
  r.normalized_rank = j.at("normalized_rank").get<double>();
  r.median_score = j.at("median_score").get<double>();
  r.cooperation_rating = j.at("cooperation_rating").get<double>();
  r.win = j.at("win").get<double>();
  r.initial_c = j.at("initial_C").get<double>();
  r.state_rates = j.at("state_rates").get<std::array<double, 4>>();
  for (std::size_t s = 0; s < 4; ++s) {
    const auto& v = j.at("cond_coop").at(kStateNames[s]);
    if (!v.is_null()) r.cond_coop[s] = v.get<double>();
  }
  return r;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("format_double failed");
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

void write_trial_csv(std::ostream& out, const TrialRecord& rec) {
  const auto& p = rec.params;
  out << "#trial,seed=" << p.seed << ",N=" << p.N << ",k=" << p.k << ",n=" << p.n
      << ",p_n=" << format_double(p.p_n) << ",p_e=" << format_double(p.p_e)
      << ",turn_cap=" << rec.turn_cap << ",engine_version=" << csv_field(rec.engine_version)
      << ",registry_digest=" << csv_field(rec.registry_digest) << '\n';
  out << "#roster";
  for (const auto& name : p.roster) out << ',' << csv_field(name);
  out << '\n';
  for (Protocol protocol : kProtocols) {
    const auto idx = static_cast<std::size_t>(protocol);
    out << "#protocol," << to_string(protocol) << ",cap_hits=" << rec.cap_hits[idx] << '\n';
    for (std::size_t c = 0; c < kResultColumns.size(); ++c) out << (c ? "," : "") << kResultColumns[c];
    out << '\n';
    for (const auto& r : rec.results[idx]) {
      out << csv_field(r.name) << ',' << r.rank << ',' << format_double(r.normalized_rank) << ','
          << format_double(r.median_score) << ',' << format_double(r.cooperation_rating) << ','
          << format_double(r.win) << ',' << format_double(r.initial_c);
      for (double v : r.state_rates) out << ',' << format_double(v);
      for (const auto& v : r.cond_coop) out << ',' << opt_field(v);
      out << '\n';
    }
  }
}

std::string trial_csv(const TrialRecord& record) {
  std::ostringstream os;
  write_trial_csv(os, record);
  return os.str();
}

nlohmann::json trial_to_json(const TrialRecord& rec) {
  const auto& p = rec.params;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json caps = nlohmann::json::object();
  for (Protocol protocol : kProtocols) {
    const auto idx = static_cast<std::size_t>(protocol);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rec.results[idx]) rows.push_back(row_to_json(r));
    results[to_string(protocol)] = std::move(rows);
    caps[to_string(protocol)] = rec.cap_hits[idx];
  }
  return {{"seed", p.seed},
          {"N", p.N},
          {"k", p.k},
          {"n", p.n},
          {"p_n", p.p_n},
          {"p_e", p.p_e},
          {"roster", p.roster},
          {"turn_cap", rec.turn_cap},
          {"engine_version", rec.engine_version},
          {"registry_digest", rec.registry_digest},
          {"cap_hits", std::move(caps)},
          {"results", std::move(results)}};
}

TrialRecord trial_from_json(const nlohmann::json& j) {
  TrialRecord rec;
  rec.params.seed = j.at("seed").get<std::uint64_t>();
  rec.params.N = j.at("N").get<std::size_t>();
  rec.params.k = j.at("k").get<std::size_t>();
  rec.params.n = j.at("n").get<std::size_t>();
  rec.params.p_n = j.at("p_n").get<double>();
  rec.params.p_e = j.at("p_e").get<double>();
  rec.params.roster = j.at("roster").get<std::vector<std::string>>();
  rec.turn_cap = j.at("turn_cap").get<std::size_t>();
  rec.engine_version = j.at("engine_version").get<std::string>();
  rec.registry_digest = j.at("registry_digest").get<std::string>();
  for (Protocol protocol : kProtocols) {
    const auto idx = static_cast<std::size_t>(protocol);
    rec.cap_hits[idx] = j.at("cap_hits").at(to_string(protocol)).get<std::size_t>();
    for (const auto& r : j.at("results").at(to_string(protocol))) rec.results[idx].push_back(row_from_json(r));
    if (rec.results[idx].size() != rec.params.N) throw Error("result rows differ from N");
  }
  return rec;
}

void write_trial_jsonl(std::ostream& out, const TrialRecord& record) {
  out << trial_to_json(record).dump() << '\n';
}

LoadResult parse_records(std::string_view text, const std::string& expected_digest) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  if (text[first] != '{') return CsvParser(text).parse(expected_digest);

  LoadResult out;
  std::size_t pos = 0, line = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    const std::string_view s = text.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (s.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      TrialRecord rec = trial_from_json(nlohmann::json::parse(s));
      check_provenance(rec, expected_digest, out.warnings);
      out.records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line, e.what());
    } catch (const Error& e) {
      throw ParseError(line, e.what());
    }
  }
  return out;
}

LoadResult load_records(const std::filesystem::path& path, const std::string& expected_digest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_records(ss.str(), expected_digest);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

LoadResult load_record_set(const std::filesystem::path& dir, const std::string& expected_digest) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) return load_records(dir, expected_digest);
  std::vector<fs::path> files;
  for (const fs::path& d : {dir, dir / "trials"}) {
    if (!fs::is_directory(d)) continue;
    for (const auto& entry : fs::directory_iterator(d)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".csv" || ext == ".jsonl")) files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  LoadResult out;
  for (const auto& f : files) {
    LoadResult part = load_records(f, expected_digest);
    std::move(part.records.begin(), part.records.end(), std::back_inserter(out.records));
    std::move(part.warnings.begin(), part.warnings.end(), std::back_inserter(out.warnings));
  }
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) { return a.params.seed < b.params.seed; });
  return out;
}

}  // namespace ipd
