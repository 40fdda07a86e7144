#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ipd {

// SplitMix64 finalizer chained over the parts. Used to derive independent
// child streams from (master seed, trial seed, protocol, pairing, repetition).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

// Stable 64-bit FNV-1a hash of a string (used for name-derived stream keys).
std::uint64_t stable_hash(std::string_view text);

// Seeded random stream. Every helper consumes a fixed number of engine draws
// so consumption never depends on the values requested.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() {
    ++draws_;
    return engine_();
  }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // True with probability p; always consumes one draw.
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace ipd
