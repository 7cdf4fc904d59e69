#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "annihilate/process.hpp"
#include "annihilate/rational.hpp"
#include "annihilate/stats.hpp"

namespace annihilate::theory {

// A catch event with known indices and speeds, against which the window of
// dependence is measured.
struct WindowSpec {
  Rational catcher_speed;
  Rational caught_speed;
  std::int64_t catcher_index = 0;  // i
  std::int64_t caught_index = 0;   // j < i
  Rational max_speed;              // s1 >= catcher_speed

  void validate() const;
};

// (t0, x0): where the catcher meets the caught bullet,
// t0 = (s_i i - s_j j) / (s_i - s_j), x0 = s_j (t0 - j).
std::pair<Rational, Rational> collision_point(const WindowSpec& spec);

// Window length a: the last integer firing slot k >= i from which a bullet
// at the maximal speed still strictly reaches x0 before t0, minus i; zero
// when no such slot exists.
std::int64_t window_a(const WindowSpec& spec);

// h(m) = a(s2, sn, 2m+1, 2) for speeds sorted descending, m >= 2.
std::int64_t h_of_m(const std::vector<Rational>& speeds_desc, std::int64_t m);

// m0 = min{ m >= 2 : h(m) > 1 }.
std::int64_t m_zero(const std::vector<Rational>& speeds_desc,
                    std::int64_t scan_limit = 1'000'000);

// epsilon = p1^(m0-1) * pn^m0 * p2^h(m0) for an atomic law on >= 3 speeds.
Rational epsilon_event(const SpeedLaw& mu);

// Survival threshold inequality, strict: p1 < p2 + eps (1 - p1 - p2).
bool threshold_holds(const Rational& p1, const Rational& p2,
                     const Rational& eps);

struct MuDelta {
  Rational delta0;
  SpeedLaw mu;
};

// The measure mu_delta (1/n - delta on s2, 1/n + delta on sn, 1/n elsewhere)
// with the largest dyadic delta0 = a / 2^dyadic_bits <= 1/(2n) still
// satisfying the self-consistent threshold inequality.
MuDelta find_mu_delta(const std::vector<Rational>& speeds_desc,
                      unsigned dyadic_bits = 20);

// ---------------------------------------------------------------------------
// Operator A and the lazy biased walk
// ---------------------------------------------------------------------------

// Probability vector on {1..K} with an absorbing overflow bucket holding the
// mass beyond K together with the mass at infinity.
struct SupportDistribution {
  std::size_t trunc = 0;     // K
  std::vector<double> mass;  // mass[k] for k = 1..K; mass[0] unused
  double overflow = 0.0;

  static SupportDistribution delta_one(std::size_t K);
  double finite_total() const;
  // P[T <= k] for k in [0, K].
  double cdf(std::size_t k) const;
};

// One application of the operator: the law of
//   1{s=s1} + 1{s=s2}(T1+T2) + 1{s<s2}(X_eps (T3+T4) + (1-X_eps) T5)
// for T_i i.i.d. ~ d, by direct convolution on {1..K} with overflow
// absorbing everything beyond K.
SupportDistribution apply_operator_A(const SupportDistribution& d, double p1,
                                     double p2, double eps, int workers = 0);

struct IterateResult {
  SupportDistribution final;
  std::vector<double> overflow_by_iteration;
  std::size_t iterations_run = 0;
  bool reached_fixpoint = false;  // consecutive iterates bit-identical
  bool monotone = true;           // CDFs pointwise nonincreasing in iteration
};

// Iterates A starting from delta_1 (the stochastically minimal law), giving
// a nondecreasing sequence converging to the unique fixed distribution.
IterateResult iterate_A(double p1, double p2, double eps,
                        std::size_t iterations, std::size_t trunc,
                        int workers = 0);

struct WalkParams {
  double left = 0.0;
  double right = 0.0;
  double lazy = 0.0;

  WalkParams(double l, double r, double z);
};

// P[the walk started at 1 ever reaches 0] = min(1, left/right).
double walk_extinction(const WalkParams& w);

// Generating function f(x) = E[x^T] of the number of leftward steps to reach
// 0: the root of f = left*x + right*f^2 + lazy*f with f(0) = 0.
double walk_return_pgf(const WalkParams& w, double x);

// Monte Carlo P[hit 0 within max_steps, started at 1].
BinomialEstimate walk_simulate(const WalkParams& w, std::uint64_t max_steps,
                               std::uint64_t reps, std::uint64_t master_seed,
                               int workers = 0, double level = 0.95,
                               std::vector<std::uint8_t>* per_rep_hit = nullptr);

}  // namespace annihilate::theory
