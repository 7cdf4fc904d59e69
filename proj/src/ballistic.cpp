#include "annihilate/ballistic.hpp"

#include <algorithm>
#include <stdexcept>

#include "annihilate/survival.hpp"
#include "annihilate/theory.hpp"

namespace annihilate::ballistic {

std::vector<Rational> shift_speeds(const std::vector<Rational>& speeds) {
  if (speeds.empty()) throw std::invalid_argument("shift_speeds: empty input");
  for (std::size_t i = 0; i < speeds.size(); ++i)
    for (std::size_t j = i + 1; j < speeds.size(); ++j)
      if (speeds[i] == speeds[j])
        throw std::invalid_argument("shift_speeds: speeds must be distinct");
  const Rational lo = *std::min_element(speeds.begin(), speeds.end());
  std::vector<Rational> out;
  out.reserve(speeds.size());
  for (const auto& r : speeds) out.push_back(r - lo + Rational(1));
  return out;
}

SpeedLaw nu_to_bullet(const Rational& p) {
  if (!(p > Rational(0) && p <= Rational(1)))
    throw std::invalid_argument("nu_to_bullet: p must lie in (0,1]");
  const Rational side = (Rational(1) - p) / Rational(2);
  return SpeedLaw::atomic({{Rational(3), side},
                           {Rational(3, 2), p},
                           {Rational(1), side}});
}

Rational pf_expo(const Rational& p) {
  if (!(p > Rational(0) && p < Rational(1)))
    throw std::invalid_argument("pf_expo: p must lie in (0,1)");
  return p * p * (Rational(1) - p) / Rational(8);
}

namespace {

// p1 = mu(3) = (1-p)/2, p2 = mu(3/2) = p for the nu dictionary.
std::pair<Rational, Rational> nu_probs(const Rational& p) {
  const Rational p1 = (Rational(1) - p) / Rational(2);
  return {p1, p};
}

ThresholdRoot bisect_threshold(bool (*predicate)(const Rational&),
                               double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bisection width must be > 0");
  // The inequality fails for small p and holds near 1; bisect on dyadic
  // probes with the predicate evaluated exactly.
  Rational lo(1, 100), hi(99, 100);
  if (predicate(lo) || !predicate(hi))
    throw std::logic_error("threshold bisection bracket is invalid");
  while ((hi - lo).to_double() > width) {
    const Rational mid = (lo + hi) / Rational(2);
    if (predicate(mid))
      hi = mid;
    else
      lo = mid;
  }
  ThresholdRoot out;
  out.below = lo;
  out.above = hi;
  out.root = ((lo + hi) / Rational(2)).to_double();
  return out;
}

}  // namespace

bool threshold_predicate_unit(const Rational& p) {
  const auto [p1, p2] = nu_probs(p);
  const Rational eps = theory::epsilon_event(nu_to_bullet(p));
  return theory::threshold_holds(p1, p2, eps);
}

bool threshold_predicate_expo(const Rational& p) {
  const auto [p1, p2] = nu_probs(p);
  return theory::threshold_holds(p1, p2, pf_expo(p));
}

ThresholdRoot threshold_unit(double width) {
  return bisect_threshold(&threshold_predicate_unit, width);
}

ThresholdRoot threshold_expo(double width) {
  return bisect_threshold(&threshold_predicate_expo, width);
}

Rational window_duration_expo(const Rational& caught_speed,
                              const Rational& catcher_speed,
                              const Rational& max_speed, const Rational& gap) {
  if (!(caught_speed > Rational(0)))
    throw std::invalid_argument("caught speed must be positive");
  if (!(caught_speed < catcher_speed))
    throw std::invalid_argument("catcher must be faster than the caught bullet");
  if (!(catcher_speed <= max_speed))
    throw std::invalid_argument("max speed must dominate the catcher");
  if (gap.sign() < 0) throw std::invalid_argument("gap must be nonnegative");
  return gap * caught_speed * (max_speed - catcher_speed) /
         (max_speed * (catcher_speed - caught_speed));
}

BinomialEstimate ba_survival_estimate(const Rational& p,
                                      std::int64_t half_width,
                                      bool poisson_spacing, std::uint64_t reps,
                                      std::uint64_t master_seed, int workers,
                                      double level) {
  if (p.is_zero() || p.sign() < 0)
    throw std::invalid_argument(
        "ba_survival_estimate: p = 0 has no speed-0 particles to condition on");
  const SpeedLaw law = nu_to_bullet(p);
  const SpacingModel spacing =
      poisson_spacing ? SpacingModel::exponential(1.0) : SpacingModel::unit();
  const auto est = engine::two_sided_estimate(
      law, spacing, half_width, Rational(3, 2), reps, master_seed, workers,
      level);
  return est.both;
}

}  // namespace annihilate::ballistic
