#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "annihilate/engine.hpp"
#include "annihilate/process.hpp"
#include "annihilate/stats.hpp"

namespace annihilate::engine {

// State of bullet 1 at the horizon. A caught verdict is final for the
// infinite process: bullets fired after the horizon cannot influence an
// event completed by it. Alive is the censoring event {catch time > horizon}.
template <class N>
struct FirstBulletFate {
  struct Caught {
    std::int64_t catcher_index;  // minimum index > 1 in bullet 1's group
    N time;
    N position;
  };
  std::optional<Caught> caught;
  N horizon;
  bool alive() const { return !caught.has_value(); }
};

template <class N>
FirstBulletFate<N> first_bullet_fate(const SpeedLaw& law,
                                     const SpacingModel& spacing,
                                     const std::optional<N>& first_speed,
                                     const N& horizon, RandomStream& stream);

// One two-sided realization over window [-m, m]. survives_plus is evaluated
// on the index-restricted sub-process 0..m (is the center ever caught from
// behind?), survives_minus on -m..0; the split makes the two sides
// independent given the center speed, which is what the product identity
// needs.
template <class N>
struct TwoSidedFates {
  bool survives_plus = false;
  bool survives_minus = false;
  bool survives_both = false;
  N center_speed{};
};

template <class N>
TwoSidedFates<N> two_sided_fates(const SpeedLaw& law,
                                 const SpacingModel& spacing, std::int64_t m,
                                 const std::optional<N>& center_speed,
                                 RandomStream& stream);

// ---------------------------------------------------------------------------
// Replicate-parallel estimators. Every replicate derives its own counter
// stream from (master_seed, replicate_id), all aggregation is integer
// counting, so results are bit-identical for any worker count.
// ---------------------------------------------------------------------------

struct CurvePoint {
  Rational horizon;
  BinomialEstimate estimate;
};

// P[bullet 1 alive at t] at each horizon. Within a replicate the same
// sampled process is scored at every horizon, so per-replicate indicators
// are nonincreasing in the horizon by construction. shard_bits, when given,
// receives the reps x horizons indicator matrix (row-major by replicate).
std::vector<CurvePoint> survival_curve(const SpeedLaw& law,
                                       const SpacingModel& spacing,
                                       const std::optional<Rational>& first_speed,
                                       const std::vector<Rational>& horizons,
                                       std::uint64_t reps,
                                       std::uint64_t master_seed,
                                       int workers = 0, double level = 0.95,
                                       std::vector<std::uint8_t>* shard_bits = nullptr);

struct TwoSidedEstimate {
  BinomialEstimate plus;
  BinomialEstimate minus;
  BinomialEstimate both;
};

// shard_bits, when given, receives reps x 3 flags (plus, minus, both).
TwoSidedEstimate two_sided_estimate(const SpeedLaw& law,
                                    const SpacingModel& spacing,
                                    std::int64_t half_width,
                                    const std::optional<Rational>& center_speed,
                                    std::uint64_t reps,
                                    std::uint64_t master_seed, int workers = 0,
                                    double level = 0.95,
                                    std::vector<std::uint8_t>* shard_bits = nullptr);

// Paired replicates sharing every draw except bullet 1's speed; counts
// realizations where the slow-first process survives the horizon but the
// fast-first one does not. The canonical coupling makes this impossible, so
// the contract is a return value of 0.
std::uint64_t monotone_coupling_check(const SpeedLaw& law,
                                      const SpacingModel& spacing,
                                      const Rational& s_lo,
                                      const Rational& s_hi,
                                      const Rational& horizon,
                                      std::uint64_t reps,
                                      std::uint64_t master_seed,
                                      int workers = 0);

}  // namespace annihilate::engine
