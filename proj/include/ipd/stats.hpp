#pragma once

#include <optional>
#include <span>
#include <vector>

namespace ipd {

// Median of a non-empty sample; even sizes average the two central values.
// Throws InsufficientData on an empty sample.
double median(std::span<const double> values);
double mean(std::span<const double> values);
// Population standard deviation.
double stddev(std::span<const double> values);

// Pearson correlation; nullopt when fewer than 3 pairs or either side is
// constant.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Column-wise z-scores of a row-major matrix. Constant columns map to 0.
std::vector<std::vector<double>> standardize(const std::vector<std::vector<double>>& rows);

}  // namespace ipd
