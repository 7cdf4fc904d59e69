#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "annihilate/rational.hpp"
#include "annihilate/rng.hpp"

namespace annihilate {

// A bullet fired from the origin: position speed * (t - fire_time) for
// t >= fire_time. Indices follow firing order and may be negative in
// two-sided windows.
template <class N>
struct Bullet {
  std::int64_t index = 0;
  N fire_time{};
  N speed{};
};

struct SpacingModel {
  enum class Kind { Unit, Exponential };
  Kind kind = Kind::Unit;
  double rate = 1.0;

  static SpacingModel unit() { return {Kind::Unit, 1.0}; }
  static SpacingModel exponential(double rate) {
    if (!(rate > 0.0))
      throw std::invalid_argument("exponential spacing needs rate > 0");
    return {Kind::Exponential, rate};
  }
  bool is_unit() const { return kind == Kind::Unit; }
};

// Speed distribution: either a finite atomic measure with exact rational
// probabilities (speeds sorted descending, s1 > s2 > ... > sn) or the
// continuous uniform measure on (0,1).
class SpeedLaw {
 public:
  struct Atom {
    Rational speed;
    Rational prob;
    double speed_d = 0.0;
  };

  static SpeedLaw atomic(std::vector<std::pair<Rational, Rational>> atoms);
  static SpeedLaw uniform01();

  bool is_atomic() const { return !atoms_.empty(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // Index of the atom with exactly this speed, if present.
  std::optional<std::size_t> atom_index(const Rational& speed) const;

  // One exact draw: integer threshold sampling over the common denominator
  // of the probabilities, so atomic sampling is bit-reproducible and free of
  // rounding in both numeric modes.
  std::size_t sample_atom(RandomStream& stream) const {
    std::uint64_t u = stream.below(weight_denom_);
    std::size_t i = 0;
    while (u >= cum_weights_[i]) ++i;
    return i;
  }

  std::uint64_t weight_denom() const { return weight_denom_; }

 private:
  std::vector<Atom> atoms_;
  std::uint64_t weight_denom_ = 1;
  std::vector<std::uint64_t> cum_weights_;
};

// Exact mode: simultaneous collisions have positive probability and demand
// exact arithmetic. Continuous speeds or exponential spacings make ties
// null events and run in binary floating point.
inline bool exact_mode(const SpeedLaw& law, const SpacingModel& spacing) {
  return law.is_atomic() && spacing.is_unit();
}

namespace detail {
template <class N>
struct NumericOps;

template <>
struct NumericOps<Rational> {
  static Rational from_int(std::int64_t v) { return Rational(v); }
  static Rational atom_speed(const SpeedLaw::Atom& a) { return a.speed; }
};

template <>
struct NumericOps<double> {
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
  static double atom_speed(const SpeedLaw::Atom& a) { return a.speed_d; }
};
}  // namespace detail

// Samples n bullets with indices 1..n. Unit spacing fires at times 1..n;
// exponential spacing at partial sums of i.i.d. exponential gaps. Speeds are
// i.i.d. from the law, except bullet 1 is overridden when first_speed is
// given (the draw is still consumed so paired couplings can share streams).
//
// Draw order per bullet: the spacing gap (exponential only), then one speed
// draw. This order is a contract relied on by the replicate-parallel drivers.
template <class N>
std::vector<Bullet<N>> sample_bullets(const SpeedLaw& law,
                                      const SpacingModel& spacing,
                                      std::size_t n,
                                      const std::optional<N>& first_speed,
                                      RandomStream& stream);

// Validation shared by sampling and the harness.
void require_in_support(const SpeedLaw& law, const Rational& speed);

}  // namespace annihilate
