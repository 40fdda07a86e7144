#include "ipd/zd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ipd {

namespace {

// Direction of the extortionate line p(phi) = base + phi * dir.
MemoryOneVector extortion_direction(double chi, const PayoffMatrix& m) {
  return {-(chi - 1.0) * (m.R - m.P), -((m.P - m.S) + chi * (m.T - m.P)),
          (m.T - m.P) + chi * (m.P - m.S), 0.0};
}

constexpr MemoryOneVector kBase{1.0, 1.0, 0.0, 0.0};

ZdFit fit_at(double chi, const MemoryOneVector& p, const PayoffMatrix& m) {
  const auto dir = extortion_direction(chi, m);
  double dot = 0.0, norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    dot += dir[i] * (p[i] - kBase[i]);
    norm += dir[i] * dir[i];
  }
  const double phi = std::clamp(dot / norm, 0.0, max_extortion_phi(chi, m));
  double residual = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = p[i] - (kBase[i] + phi * dir[i]);
    residual += d * d;
  }
  return ZdFit{chi, phi, residual};
}

}  // namespace

MemoryOneVector extortion_vector(double chi, double phi, const PayoffMatrix& m) {
  const auto dir = extortion_direction(chi, m);
  MemoryOneVector out;
  for (int i = 0; i < 4; ++i) out[i] = kBase[i] + phi * dir[i];
  return out;
}

double max_extortion_phi(double chi, const PayoffMatrix& m) {
  double bound = 1.0 / ((m.P - m.S) + chi * (m.T - m.P));
  bound = std::min(bound, 1.0 / ((m.T - m.P) + chi * (m.P - m.S)));
  if (chi > 1.0) bound = std::min(bound, 1.0 / ((chi - 1.0) * (m.R - m.P)));
  return bound;
}

MemoryOneVector zd_vector(double phi, double s, double l, const PayoffMatrix& m) {
  return {1.0 - phi * (1.0 - s) * (m.R - l), 1.0 - phi * (s * (l - m.S) + (m.T - l)),
          phi * (s * (m.T - l) + (l - m.S)), phi * (1.0 - s) * (l - m.P)};
}

ZdFit fit_extortionate_zd(const MemoryOneVector& p, const PayoffMatrix& m) {
  constexpr int kGrid = 400;
  const double log_lo = std::log(kZdChiMin), log_hi = std::log(kZdChiMax);
  auto chi_at = [&](int i) { return std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1)); };

  int best_i = 0;
  ZdFit best = fit_at(chi_at(0), p, m);
  for (int i = 1; i < kGrid; ++i) {
    const ZdFit f = fit_at(chi_at(i), p, m);
    if (f.residual < best.residual) {
      best = f;
      best_i = i;
    }
  }

  // Golden-section search on the bracketing grid interval.
  double a = chi_at(std::max(best_i - 1, 0));
  double b = chi_at(std::min(best_i + 1, kGrid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  ZdFit fc = fit_at(c, p, m), fd = fit_at(d, p, m);
  for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
    if (fc.residual < fd.residual) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fit_at(c, p, m);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fit_at(d, p, m);
    }
  }
  for (const ZdFit& f : {fc, fd}) {
    if (f.residual < best.residual) best = f;
  }
  return best;
}

double sse_to_zd(const MemoryOneVector& p, const PayoffMatrix& m) {
  return std::clamp(fit_extortionate_zd(p, m).residual, 0.0, 1.0);
}

std::optional<double> sse_to_zd(const std::array<std::optional<double>, 4>& p,
                                const PayoffMatrix& m) {
  MemoryOneVector v;
  for (int i = 0; i < 4; ++i) {
    if (!p[i]) return std::nullopt;
    v[i] = *p[i];
  }
  return sse_to_zd(v, m);
}

}  // namespace ipd
