#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ipd/analysis.hpp"
#include "ipd/batch.hpp"
#include "ipd/errors.hpp"
#include "ipd/filter.hpp"
#include "ipd/records.hpp"
#include "ipd/registry.hpp"
#include "ipd/stats.hpp"

namespace {

using namespace ipd;
namespace fs = std::filesystem;

enum Exit { kOk = 0, kRuntime = 1, kConfig = 2, kInsufficient = 3 };

struct RunOptions {
  std::string config;
  std::string seeds;
  std::string out;
  std::size_t workers = 0;
};

struct RankOptions {
  std::string in;
  std::string type = "standard";
  std::string filter;
  std::size_t top = 15;
  std::string csv;
};

struct AnalyzeOptions {
  std::string in;
  std::string type = "standard";
  int approach = 1;
  std::string what = "correlations";
  std::string filter;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t trees = 100;
  std::size_t workers = 1;
};

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

// Output sink: a file when a path is given, otherwise stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct LoadedSet {
  std::vector<TrialRecord> records;
  std::string manifest_digest = "none";
};

LoadedSet load_input(const std::string& in) {
  LoadedSet set;
  LoadResult res = load_record_set(in, default_registry().digest());
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  set.records = std::move(res.records);
  if (fs::is_directory(in)) {
    if (auto m = read_manifest(in); m && m->contains("manifest_digest")) {
      set.manifest_digest = m->at("manifest_digest").get<std::string>();
    }
  }
  return set;
}

std::vector<const TrialRecord*> select(const LoadedSet& set, const std::string& filter_text) {
  const TrialFilter filter = TrialFilter::parse(filter_text);
  std::vector<const TrialRecord*> out;
  for (const auto& r : set.records) {
    if (filter.matches(r.params)) out.push_back(&r);
  }
  return out;
}

std::optional<Protocol> parse_type(const std::string& type) {
  if (type == "overall") return std::nullopt;
  return parse_protocol(type);
}

int cmd_run(const RunOptions& o) {
  std::string config_path = o.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) config_path = env;
  }
  BatchConfig cfg = config_path.empty() ? BatchConfig{} : BatchConfig::load(config_path);
  if (!o.seeds.empty()) std::tie(cfg.seed_first, cfg.seed_last) = parse_seed_span(o.seeds);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.workers > 0) cfg.workers = o.workers;
  const BatchOutcome res = run_batch(cfg, default_registry());
  std::cout << "trials written: " << res.written << ", kept from earlier runs: " << res.skipped
            << ", turn-cap hits: " << res.cap_hits << "\nmanifest: " << (cfg.out_dir / "manifest.json").string()
            << '\n';
  return kOk;
}

int cmd_rank(const RankOptions& o) {
  const Protocol protocol = parse_protocol(o.type);
  const LoadedSet set = load_input(o.in);
  const auto trials = select(set, o.filter);
  std::vector<const std::vector<ResultRow>*> tables;
  for (const auto* t : trials) tables.push_back(&t->rows(protocol));
  const auto summary = median_rank_table(tables);
  if (!summary) {
    std::cerr << "no tournaments match the filter\n";
    return kInsufficient;
  }
  const std::size_t shown = std::min(o.top, summary->size());
  std::cout << "# " << tables.size() << " " << o.type << " tournaments"
            << (o.filter.empty() ? "" : " where " + o.filter) << '\n';
  std::cout << std::left << std::setw(6) << "pos" << std::setw(28) << "strategy" << std::setw(12) << "median_r"
            << "tournaments\n";
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& e = (*summary)[i];
    std::cout << std::left << std::setw(6) << i + 1 << std::setw(28) << e.name << std::setw(12) << std::fixed
              << std::setprecision(5) << e.median_normalized_rank << e.participation << '\n';
  }
  if (!o.csv.empty()) {
    Sink sink(o.csv);
    auto& out = sink.out();
    out << "# manifest_digest=" << set.manifest_digest << '\n';
    out << "position,name,median_normalized_rank,participation\n";
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& e = (*summary)[i];
      out << i + 1 << ',' << csv_field(e.name) << ',' << format_double(e.median_normalized_rank) << ','
          << e.participation << '\n';
    }
  }
  return kOk;
}

void write_correlations(std::ostream& out, const Dataset& ds) {
  out << "feature,corr_r,corr_median_score,pairs\n";
  for (const auto& c : target_correlations(ds)) {
    out << csv_field(c.feature) << ',' << opt(c.with_r) << ',' << opt(c.with_score) << ',' << c.pairs << '\n';
  }
}

void write_matrix(std::ostream& out, const Dataset& ds) {
  const CorrelationMatrix m = correlation_matrix(ds);
  out << "feature";
  for (const auto& n : m.names) out << ',' << csv_field(n);
  out << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out << csv_field(m.names[i]);
    for (const auto& v : m.values[i]) out << ',' << opt(v);
    out << '\n';
  }
}

void write_importance(std::ostream& out, const Dataset& ds, const AnalyzeOptions& o) {
  ForestParams params;
  params.seed = o.seed;
  params.trees = o.trees;
  params.workers = o.workers;
  const ImportanceReport rep = feature_importance(ds, o.approach, params);
  out << "# approach=" << o.approach << " score=" << format_double(rep.holdout_score)
      << " oob_score=" << format_double(rep.oob_score) << " train_rows=" << rep.train_rows
      << " test_rows=" << rep.test_rows << " imputed_cond=" << rep.imputed_cond;
  if (rep.clustering.chosen_k) {
    out << " chosen_k=" << *rep.clustering.chosen_k << " silhouette=" << format_double(*rep.clustering.silhouette);
  }
  out << '\n';
  std::vector<std::size_t> order(rep.features.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rep.importances[a] > rep.importances[b]; });
  out << "feature,importance\n";
  for (auto i : order) out << csv_field(rep.features[i]) << ',' << format_double(rep.importances[i]) << '\n';
}

void write_winners(std::ostream& out, const Dataset& ds) {
  const WinnerSummary w = winners(ds);
  if (w.c_r.empty()) throw InsufficientData("no winning rows (r = 0) in the selection", 1);
  out << "# winners=" << w.c_r.size() << " median_C_r=" << format_double(median(w.c_r));
  if (!w.c_r_over_mean.empty()) out << " median_C_r/C_mean=" << format_double(median(w.c_r_over_mean));
  if (!w.c_r_over_median.empty()) out << " median_C_r/C_median=" << format_double(median(w.c_r_over_median));
  out << '\n';
  out << "feature,bin_lo,bin_hi,count\n";
  auto emit = [&](const std::string& name, const std::vector<double>& v, double hi, std::size_t bins) {
    if (v.empty()) return;
    const Histogram h = histogram(name, v, 0.0, hi, bins);
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << csv_field(h.feature) << ',' << format_double(h.lo + h.width * static_cast<double>(b)) << ','
          << format_double(h.lo + h.width * static_cast<double>(b + 1)) << ',' << h.counts[b] << '\n';
    }
  };
  auto upper = [](const std::vector<double>& v) {
    const double m = v.empty() ? 1.0 : *std::max_element(v.begin(), v.end());
    return std::max(2.0, std::ceil(m));
  };
  emit("C_r", w.c_r, 1.0, 20);
  emit("C_r/C_mean", w.c_r_over_mean, upper(w.c_r_over_mean), static_cast<std::size_t>(upper(w.c_r_over_mean) * 10));
  emit("C_r/C_median", w.c_r_over_median, upper(w.c_r_over_median),
       static_cast<std::size_t>(upper(w.c_r_over_median) * 10));
}

void write_features(std::ostream& out, const Dataset& ds) {
  out << "seed,type,name";
  for (const char* f : kFeatureNames) out << ',' << csv_field(f);
  out << ",r,median_score\n";
  for (const auto& row : ds.rows) {
    out << row.seed << ',' << to_string(row.protocol) << ',' << csv_field(row.name);
    for (const auto& v : row.values) out << ',' << opt(v);
    out << ',' << format_double(row.r) << ',' << format_double(row.median_score) << '\n';
  }
}

int cmd_analyze(const AnalyzeOptions& o) {
  const auto protocol = parse_type(o.type);
  if (o.approach < 1 || o.approach > kApproachCount) throw ConfigError("approach must be 1..4");
  const LoadedSet set = load_input(o.in);
  const auto trials = select(set, o.filter);
  if (trials.empty()) throw InsufficientData("no trials match the selection", 1);
  const Dataset ds = build_dataset(trials, protocol, default_registry());
  if (ds.rows.size() < 3) throw InsufficientData("analysis needs rows", 3);

  std::ostringstream body;
  if (o.what == "correlations") {
    write_correlations(body, ds);
  } else if (o.what == "matrix") {
    write_matrix(body, ds);
  } else if (o.what == "importance") {
    write_importance(body, ds, o);
  } else if (o.what == "winners") {
    write_winners(body, ds);
  } else if (o.what == "features") {
    write_features(body, ds);
  } else {
    throw ConfigError("unknown analysis: " + o.what);
  }
  Sink sink(o.out);
  sink.out() << "# manifest_digest=" << set.manifest_digest << '\n'
             << "# type=" << o.type << " trials=" << trials.size() << " rows=" << ds.rows.size() << '\n'
             << body.str();
  return kOk;
}

int cmd_registry(bool json, const std::string& out) {
  const Registry& reg = default_registry();
  Sink sink(out);
  if (json) {
    sink.out() << reg.manifest_text();
    return kOk;
  }
  sink.out() << "# " << reg.size() << " strategies, digest " << reg.digest() << '\n';
  for (const auto& s : reg.strategies()) {
    const auto& m = s->metadata();
    sink.out() << s->name() << " [" << to_string(s->kind()) << "] memory="
               << (m.infinite_memory() ? std::string("inf") : std::to_string(m.memory_depth))
               << (m.stochastic ? " stochastic" : "") << (m.makes_use_of_length ? " length" : "")
               << (m.makes_use_of_game ? " game" : "") << '\n';
  }
  for (const auto& [alias, target] : reg.aliases()) sink.out() << alias << " -> " << target << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated prisoner's dilemma tournament laboratory"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Sample and run trials, writing trials/<seed>.csv and manifest.json");
  run_cmd->add_option("--config", run.config, std::string("Batch config JSON (default: $") + kConfigEnvVar + ")");
  run_cmd->add_option("--seeds", run.seeds, "Seed span A..B (overrides the config)");
  run_cmd->add_option("--out", run.out, "Output directory (overrides the config)");
  run_cmd->add_option("--workers", run.workers, "Worker threads (overrides the config)");

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "Median normalized rank table over stored trials");
  rank_cmd->add_option("--in", rank.in, "Batch directory or record file")->required();
  rank_cmd->add_option("--type", rank.type, "standard, noisy, probend or noisy_probend");
  rank_cmd->add_option("--filter", rank.filter, "e.g. \"p_n < 0.5\" or \"p_e<0.1 and N>=10\"");
  rank_cmd->add_option("--top", rank.top, "Rows to show");
  rank_cmd->add_option("--csv", rank.csv, "Also write the table as CSV");

  AnalyzeOptions an;
  auto* an_cmd = app.add_subcommand("analyze", "Correlations, feature importance and winner distributions");
  an_cmd->add_option("--in", an.in, "Batch directory or record file")->required();
  an_cmd->add_option("--type", an.type, "standard, noisy, probend, noisy_probend or overall");
  an_cmd->add_option("--approach", an.approach, "Clustering approach 1-4 (importance)");
  an_cmd->add_option("--what", an.what, "correlations, matrix, importance, winners or features");
  an_cmd->add_option("--filter", an.filter, "Trial filter");
  an_cmd->add_option("--out", an.out, "Output CSV (default: stdout)");
  an_cmd->add_option("--seed", an.seed, "Seed for clustering and forest");
  an_cmd->add_option("--trees", an.trees, "Forest size");
  an_cmd->add_option("--workers", an.workers, "Threads for tree fitting");

  bool reg_json = false;
  std::string reg_out;
  auto* reg_cmd = app.add_subcommand("registry", "List the strategy registry");
  reg_cmd->add_flag("--json", reg_json, "Print the versioned registry manifest");
  reg_cmd->add_option("--out", reg_out, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*rank_cmd) return cmd_rank(rank);
    if (*an_cmd) return cmd_analyze(an);
    if (*reg_cmd) return cmd_registry(reg_json, reg_out);
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInsufficient;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
