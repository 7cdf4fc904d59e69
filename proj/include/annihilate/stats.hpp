#pragma once

#include <cstdint>

namespace annihilate {

struct Interval {
  double low = 0.0;
  double high = 1.0;
  double half_width() const { return 0.5 * (high - low); }
};

// Binomial point estimate with a Wilson score interval. Wilson stays sane
// near 0 and 1, where survival probabilities live.
struct BinomialEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double point = 0.0;
  Interval ci;
  double level = 0.95;
};

// Two-sided normal quantile for the given confidence level (e.g. 0.95 -> 1.96).
double normal_two_sided_z(double level);

BinomialEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials,
                                 double level = 0.95);

}  // namespace annihilate
