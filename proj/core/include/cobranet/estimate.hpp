#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace cobranet {

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;

  /// |value - mean| expressed in standard errors; infinite when the
  /// estimate is degenerate and disagrees with value.
  double z_score(double value) const {
    const double diff = std::abs(value - mean);
    if (std_error > 0.0) return diff / std_error;
    return diff == 0.0 ? 0.0 : INFINITY;
  }
};

/// Estimate of a success probability from Bernoulli outcomes.
inline Estimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {};
  const double mean = static_cast<double>(successes) / static_cast<double>(trials);
  return {mean, std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials)), trials};
}

/// Estimate of a mean from the running sums of n observations.
inline Estimate sample_estimate(double sum, double sum_sq, std::uint64_t n) {
  if (n == 0) return {};
  const double count = static_cast<double>(n);
  const double mean = sum / count;
  const double var = n > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0)) : 0.0;
  return {mean, std::sqrt(var / count), n};
}

}  // namespace cobranet
