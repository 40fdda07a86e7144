#pragma once

#include <array>
#include <optional>

#include "ipd/archetypes.hpp"
#include "ipd/payoff.hpp"

namespace ipd {

// Best extortionate zero-determinant fit to a memory-one vector.
struct ZdFit {
  double chi = 1.0;       // extortion factor, >= 1
  double phi = 0.0;       // scale, within the feasibility interval for chi
  double residual = 0.0;  // sum of squared componentwise differences
};

// Extortionate vector with p_DD = 0:
//   p = (1, 1, 0, 0) + phi * [(S_X - P) - chi * (S_Y - P)]
// where S_X = (R, S, T, P) and S_Y = (R, T, S, P).
MemoryOneVector extortion_vector(double chi, double phi, const PayoffMatrix& m = {});

// Largest phi keeping every component of extortion_vector(chi, phi) in [0, 1].
double max_extortion_phi(double chi, const PayoffMatrix& m = {});

// Zero-determinant vector in the (phi, s, l) parameterization: baseline
// payoff l and slope s. l = P gives extortion with chi = 1 / s.
MemoryOneVector zd_vector(double phi, double s, double l, const PayoffMatrix& m = {});

inline constexpr double kZdChiMin = 1.0;
inline constexpr double kZdChiMax = 20.0;

// Minimizes the squared distance to the extortionate family over
// chi in [kZdChiMin, kZdChiMax]: log-spaced grid then golden-section
// refinement. For fixed chi the optimal phi is the clamped least-squares
// projection onto the line p(phi).
ZdFit fit_extortionate_zd(const MemoryOneVector& p, const PayoffMatrix& m = {});

// Residual of the best fit clamped to [0, 1].
double sse_to_zd(const MemoryOneVector& p, const PayoffMatrix& m = {});
// Absent when any component is absent.
std::optional<double> sse_to_zd(const std::array<std::optional<double>, 4>& p,
                                const PayoffMatrix& m = {});

}  // namespace ipd
