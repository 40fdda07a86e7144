#include "ipd/trials.hpp"

#include <algorithm>
#include <numeric>

#include "ipd/errors.hpp"

namespace ipd {

namespace {

constexpr std::uint64_t kSampleTag = 0x73616d706c65ULL;

void check(const IntRange& r, const char* name, std::int64_t min) {
  if (r.lo < min || r.lo > r.hi) {
    throw ValidationError(name, "range must satisfy " + std::to_string(min) + " <= lo <= hi");
  }
}

void check(const RealRange& r, const char* name) {
  if (!(r.lo >= 0.0 && r.lo <= r.hi && r.hi <= 1.0)) {
    throw ValidationError(name, "range must satisfy 0 <= lo <= hi <= 1");
  }
}

IntRange int_range(const nlohmann::json& j, const char* key, IntRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ValidationError(key, "expected [lo, hi] integers");
  }
  return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
}

RealRange real_range(const nlohmann::json& j, const char* key, RealRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(key, "expected [lo, hi] numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

void ParameterRanges::validate() const {
  check(N, "N", 3);
  check(k, "k", 1);
  check(n, "n", 1);
  check(p_n, "p_n");
  check(p_e, "p_e");
  if (p_e.hi <= 0.0) throw ValidationError("p_e", "upper bound must be positive");
}

nlohmann::json ParameterRanges::to_json() const {
  return {{"N", {N.lo, N.hi}},       {"k", {k.lo, k.hi}},       {"n", {n.lo, n.hi}},
          {"p_n", {p_n.lo, p_n.hi}}, {"p_e", {p_e.lo, p_e.hi}}};
}

ParameterRanges ParameterRanges::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("ranges must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "N" && key != "k" && key != "n" && key != "p_n" && key != "p_e") {
      throw ValidationError(key, "unknown range");
    }
  }
  ParameterRanges r;
  r.N = int_range(j, "N", r.N);
  r.k = int_range(j, "k", r.k);
  r.n = int_range(j, "n", r.n);
  r.p_n = real_range(j, "p_n", r.p_n);
  r.p_e = real_range(j, "p_e", r.p_e);
  r.validate();
  return r;
}

TrialParams sample_trial_params(std::uint64_t seed, const ParameterRanges& ranges,
                                const Registry& registry, std::uint64_t master_seed) {
  ranges.validate();
  const auto size = static_cast<std::int64_t>(registry.size());
  if (size < ranges.N.lo) {
    throw ConfigError("registry has " + std::to_string(size) + " strategies, fewer than N_min = " +
                      std::to_string(ranges.N.lo));
  }
  Rng rng(mix_seed({master_seed, seed, kSampleTag}));
  TrialParams p;
  p.seed = seed;
  p.N = static_cast<std::size_t>(rng.uniform_int(ranges.N.lo, std::min(ranges.N.hi, size)));

  std::vector<std::size_t> idx(registry.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < p.N; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), size - 1));
    std::swap(idx[i], idx[j]);
    p.roster.push_back(registry.strategies()[idx[i]]->name());
  }

  p.k = static_cast<std::size_t>(rng.uniform_int(ranges.k.lo, ranges.k.hi));
  p.n = static_cast<std::size_t>(rng.uniform_int(ranges.n.lo, ranges.n.hi));
  p.p_n = rng.uniform(ranges.p_n.lo, ranges.p_n.hi);
  do {
    p.p_e = rng.uniform(ranges.p_e.lo, ranges.p_e.hi);
  } while (p.p_e <= 0.0);
  return p;
}

TournamentConfig tournament_config(const TrialParams& params, Protocol protocol,
                                   std::size_t turn_cap) {
  TournamentConfig cfg;
  cfg.roster = params.roster;
  cfg.protocol = protocol;
  cfg.repetitions = params.k;
  cfg.turn_cap = turn_cap;
  if (is_probend(protocol)) {
    cfg.end_probability = params.p_e;
  } else {
    cfg.turns = params.n;
  }
  if (is_noisy(protocol)) cfg.noise = params.p_n;
  return cfg;
}

TrialRecord run_trial(std::uint64_t seed, const ParameterRanges& ranges, const Registry& registry,
                      std::size_t turn_cap, std::uint64_t master_seed) {
  TrialRecord rec;
  rec.params = sample_trial_params(seed, ranges, registry, master_seed);
  rec.turn_cap = turn_cap;
  rec.engine_version = kEngineVersion;
  rec.registry_digest = registry.digest();
  for (Protocol protocol : kProtocols) {
    const auto tag = static_cast<std::uint64_t>(protocol) + 1;
    try {
      TournamentResult res = run_tournament(tournament_config(rec.params, protocol, turn_cap),
                                            registry, mix_seed({master_seed, seed, tag}));
      rec.results[tag - 1] = std::move(res.rows);
      rec.cap_hits[tag - 1] = res.cap_hits;
    } catch (const ConfigError& e) {
      throw ConfigError("seed " + std::to_string(seed) + ", " + to_string(protocol) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("seed " + std::to_string(seed) + ", " + to_string(protocol) + ": " + e.what());
    }
  }
  return rec;
}

}  // namespace ipd
