#include "ipd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ipd/errors.hpp"

namespace ipd {

double median(std::span<const double> values) {
  if (values.empty()) throw InsufficientData("median of an empty sample", 1);
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InsufficientData("mean of an empty sample", 1);
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: samples differ in length");
  if (x.size() < 3) return std::nullopt;
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::vector<double>> standardize(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t p = rows.front().size();
  std::vector<std::vector<double>> out = rows;
  std::vector<double> col(rows.size());
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][j];
    const double m = mean(col), s = stddev(col);
    for (std::size_t i = 0; i < rows.size(); ++i) out[i][j] = s > 0.0 ? (rows[i][j] - m) / s : 0.0;
  }
  return out;
}

}  // namespace ipd
