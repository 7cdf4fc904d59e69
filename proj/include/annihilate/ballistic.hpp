#pragma once

#include <cstdint>
#include <vector>

#include "annihilate/process.hpp"
#include "annihilate/rational.hpp"
#include "annihilate/stats.hpp"

namespace annihilate::ballistic {

// Order-preserving affine shift r' = r - min(r) + 1 making every speed
// strictly positive; collision partners are invariant under such maps.
std::vector<Rational> shift_speeds(const std::vector<Rational>& speeds);

// The symmetric three-speed annihilation law nu (mass p on speed 0,
// (1-p)/2 on speeds +-1) as a two-sided bullet process: S = {1, 3/2, 3} with
// mu(3/2) = p and mu(1) = mu(3) = (1-p)/2. The bullet speeds are the
// reciprocals of the affinely shifted particle speeds; the middle particle
// speed maps to bullet speed 3/2.
SpeedLaw nu_to_bullet(const Rational& p);

// P[F] for exponential(1) spacings: exactly one bullet fired inside the
// window of dependence, with the required speeds: p^2 (1-p) / 8.
Rational pf_expo(const Rational& p);

// The survival threshold inequality at speed-0 density p, unit spacings:
// p1 < p2 + eps (1-p1-p2) with p1 = (1-p)/2, p2 = p and
// eps = ((1-p)/2)^3 p^2 (equivalently epsilon_event of nu_to_bullet(p)).
bool threshold_predicate_unit(const Rational& p);

// Same inequality with the exponential-spacing event probability pf_expo.
bool threshold_predicate_expo(const Rational& p);

struct ThresholdRoot {
  double root = 0.0;     // midpoint of the final bracket
  Rational below;        // largest probe where the inequality fails
  Rational above;        // smallest probe where it holds
};

// Root of the threshold equality in (0,1), bisected to the given width with
// the predicate evaluated in exact rational arithmetic at each probe.
ThresholdRoot threshold_unit(double width = 1e-6);
ThresholdRoot threshold_expo(double width = 1e-6);

// Continuous-time window length behind a catcher fired a gap xi after the
// caught bullet: xi * u * (s1 - v) / (s1 * (v - u)).
Rational window_duration_expo(const Rational& caught_speed,
                              const Rational& catcher_speed,
                              const Rational& max_speed, const Rational& gap);

// P[the center speed-0 particle survives both sides] in nu-ballistic
// annihilation, estimated through the two-sided bullet process with the
// center bullet conditioned on the middle speed. poisson_spacing selects
// exponential(1) firing gaps (Poisson particle positions).
BinomialEstimate ba_survival_estimate(const Rational& p,
                                      std::int64_t half_width,
                                      bool poisson_spacing, std::uint64_t reps,
                                      std::uint64_t master_seed,
                                      int workers = 0, double level = 0.95);

}  // namespace annihilate::ballistic
