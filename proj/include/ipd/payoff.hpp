#pragma once

#include <utility>

#include "ipd/action.hpp"

namespace ipd {

// Per-turn game values. Valid matrices satisfy T > R > P > S and 2R > T + S.
struct PayoffMatrix {
  double R = 3.0;
  double S = 0.0;
  double T = 5.0;
  double P = 1.0;

  bool valid() const { return T > R && R > P && P > S && 2 * R > T + S; }
  // Throws ConfigError when the ordering constraints do not hold.
  void validate() const;

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;
};

// (focal score, opponent score) for one turn.
constexpr std::pair<double, double> payoff(Action self, Action other,
                                           const PayoffMatrix& m) {
  if (self == Action::C) {
    return other == Action::C ? std::pair{m.R, m.R} : std::pair{m.S, m.T};
  }
  return other == Action::C ? std::pair{m.T, m.S} : std::pair{m.P, m.P};
}

}  // namespace ipd
