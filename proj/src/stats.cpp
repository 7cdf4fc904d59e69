#include "annihilate/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <stdexcept>

namespace annihilate {

double normal_two_sided_z(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence level must be in (0,1)");
  boost::math::normal_distribution<double> n;
  return boost::math::quantile(n, 0.5 + level / 2.0);
}

BinomialEstimate wilson_estimate(std::uint64_t successes, std::uint64_t trials,
                                 double level) {
  if (trials == 0) throw std::invalid_argument("wilson_estimate: zero trials");
  if (successes > trials)
    throw std::invalid_argument("wilson_estimate: successes > trials");
  const double z = normal_two_sided_z(level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double spread =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  BinomialEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.point = p;
  e.ci = {std::max(0.0, center - spread), std::min(1.0, center + spread)};
  if (successes == 0) e.ci.low = 0.0;
  if (successes == trials) e.ci.high = 1.0;
  e.level = level;
  return e;
}

}  // namespace annihilate
