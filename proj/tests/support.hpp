#pragma once

#include <string>
#include <vector>

#include "ipd/action.hpp"
#include "ipd/engine.hpp"
#include "ipd/registry.hpp"

namespace ipd::test {

inline StrategyPtr strategy(const std::string& name) { return default_registry().find(name); }

// Deterministic match of two registry strategies.
inline MatchRecord play(const std::string& a, const std::string& b, std::size_t turns,
                        double noise = 0.0, std::uint64_t seed = 1) {
  Rng rng(seed);
  return play_match_fixed(*strategy(a), *strategy(b), turns, noise, rng);
}

inline std::vector<Action> random_actions(Rng& rng, std::size_t n, double p_c = 0.5) {
  std::vector<Action> out(n);
  for (auto& a : out) a = rng.bernoulli(p_c) ? Action::C : Action::D;
  return out;
}

inline Action next(const StrategySpec& s, const std::string& own, const std::string& opp,
                   std::uint64_t seed = 0, std::optional<std::size_t> turns_total = std::nullopt) {
  Rng rng(seed);
  MatchContext ctx;
  ctx.turns_total = turns_total;
  const auto o = parse_actions(own), p = parse_actions(opp);
  return next_action(s, o, p, ctx, rng);
}

inline Action next(const std::string& name, const std::string& own, const std::string& opp,
                   std::uint64_t seed = 0, std::optional<std::size_t> turns_total = std::nullopt) {
  return next(*strategy(name), own, opp, seed, turns_total);
}

}  // namespace ipd::test

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace ipd::test {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ipdlab-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace ipd::test
