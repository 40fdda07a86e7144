#include "ipd/batch.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ipd/digest.hpp"
#include "ipd/errors.hpp"
#include "ipd/records.hpp"

namespace ipd {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes through a temporary file so a crash never leaves a partial file.
void write_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << bytes;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(key, "missing or wrong type");
  }
}

}  // namespace

BatchConfig BatchConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"ranges",   "strategies", "seeds", "master_seed",
                                                 "turn_cap", "out",        "workers"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError(key, "unknown config key");
    }
  }
  BatchConfig c;
  if (j.contains("ranges")) c.ranges = ParameterRanges::from_json(j.at("ranges"));
  if (j.contains("strategies")) c.strategies = field<std::vector<std::string>>(j, "strategies");
  if (j.contains("seeds")) {
    const auto s = field<std::vector<std::uint64_t>>(j, "seeds");
    if (s.size() != 2) throw ValidationError("seeds", "expected [first, last]");
    c.seed_first = s[0];
    c.seed_last = s[1];
  }
  if (j.contains("master_seed")) c.master_seed = field<std::uint64_t>(j, "master_seed");
  if (j.contains("turn_cap")) c.turn_cap = field<std::size_t>(j, "turn_cap");
  if (j.contains("out")) c.out_dir = field<std::string>(j, "out");
  if (j.contains("workers")) c.workers = field<std::size_t>(j, "workers");
  c.validate();
  return c;
}

BatchConfig BatchConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  try {
    BatchConfig c = from_json(nlohmann::json::parse(in));
    if (c.out_dir.is_relative()) c.out_dir = path.parent_path() / c.out_dir;
    return c;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

void BatchConfig::validate() const {
  ranges.validate();
  if (seed_first > seed_last) throw ValidationError("seeds", "first exceeds last");
  if (turn_cap < 1) throw ValidationError("turn_cap", "must be positive");
  if (workers < 1) throw ValidationError("workers", "must be positive");
}

nlohmann::json BatchConfig::reproducible_json() const {
  return {{"ranges", ranges.to_json()},
          {"strategies", strategies},
          {"seeds", {seed_first, seed_last}},
          {"master_seed", master_seed},
          {"turn_cap", turn_cap}};
}

std::string BatchConfig::digest() const { return sha256_hex(reproducible_json().dump()); }

fs::path trial_path(const fs::path& out_dir, std::uint64_t seed) {
  return out_dir / "trials" / (std::to_string(seed) + ".csv");
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_span(const std::string& text) {
  const auto dots = text.find("..");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-') throw ConfigError("bad seed span: " + text);
    return v;
  };
  if (dots == std::string::npos) {
    const auto v = num(text);
    return {v, v};
  }
  const auto a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
  if (a > b) throw ConfigError("bad seed span: " + text);
  return {a, b};
}

std::optional<nlohmann::json> read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) return std::nullopt;
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("unreadable manifest " + path.string() + ": " + e.what());
  }
}

BatchOutcome run_batch(const BatchConfig& cfg, const Registry& base,
                       const std::function<void(std::uint64_t)>& on_trial) {
  cfg.validate();
  const Registry registry = cfg.strategies.empty() ? base : base.subset(cfg.strategies);
  if (static_cast<std::int64_t>(registry.size()) < cfg.ranges.N.lo) {
    throw ConfigError("registry subset smaller than N_min");
  }
  const std::string config_digest = cfg.digest();
  // Seed spans may differ between runs sharing one directory.
  nlohmann::json sampling = cfg.reproducible_json();
  sampling.erase("seeds");
  const std::string sampling_digest = sha256_hex(sampling.dump());
  fs::create_directories(cfg.out_dir / "trials");

  nlohmann::json manifest = {{"tool", "ipdlab"},
                             {"tool_version", kToolVersion},
                             {"engine_version", kEngineVersion},
                             {"config", cfg.reproducible_json()},
                             {"config_digest", config_digest},
                             {"sampling_digest", sampling_digest},
                             {"registry_digest", registry.digest()},
                             {"registry_size", registry.size()},
                             {"seed_first", cfg.seed_first},
                             {"seed_last", cfg.seed_last}};

  if (auto existing = read_manifest(cfg.out_dir)) {
    if (existing->value("sampling_digest", "") != sampling_digest ||
        existing->value("registry_digest", "") != registry.digest()) {
      throw ConfigError("output directory " + cfg.out_dir.string() +
                        " holds a batch from a different config or registry");
    }
  }
  // Provisional manifest marks the directory for resumption.
  nlohmann::json provisional = manifest;
  provisional["status"] = "incomplete";
  write_atomic(cfg.out_dir / "manifest.json", provisional.dump(2) + "\n");
  write_atomic(cfg.out_dir / "registry.json", registry.manifest_text());

  const std::uint64_t count = cfg.seed_last - cfg.seed_first + 1;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::size_t> written{0}, skipped{0}, cap_hits{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    while (!failed) {
      const std::uint64_t i = next++;
      if (i >= count) return;
      const std::uint64_t seed = cfg.seed_first + i;
      try {
        const fs::path path = trial_path(cfg.out_dir, seed);
        if (fs::exists(path)) {
          ++skipped;
        } else {
          const TrialRecord rec = run_trial(seed, cfg.ranges, registry, cfg.turn_cap, cfg.master_seed);
          for (auto c : rec.cap_hits) cap_hits += c;
          write_atomic(path, trial_csv(rec));
          ++written;
        }
        if (on_trial) {
          std::lock_guard lock(mu);
          on_trial(seed);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t threads = std::min<std::uint64_t>(cfg.workers, count);
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);

  nlohmann::json trials = nlohmann::json::array();
  for (std::uint64_t seed = cfg.seed_first; seed <= cfg.seed_last; ++seed) {
    const fs::path path = trial_path(cfg.out_dir, seed);
    trials.push_back({{"seed", seed},
                      {"file", fs::relative(path, cfg.out_dir).generic_string()},
                      {"sha256", sha256_hex(read_file(path))}});
    if (seed == cfg.seed_last) break;
  }
  manifest["status"] = "complete";
  manifest["trials"] = std::move(trials);
  const std::string text = manifest.dump(2) + "\n";
  manifest["manifest_digest"] = sha256_hex(text);
  write_atomic(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::ofstream log(cfg.out_dir / "runs.log", std::ios::app);
  log << utc_now() << " seeds=" << cfg.seed_first << ".." << cfg.seed_last
      << " written=" << written << " skipped=" << skipped << " workers=" << cfg.workers << '\n';

  return {written, skipped, cap_hits};
}

}  // namespace ipd
