#include "annihilate/theory.hpp"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace annihilate::theory {

namespace {

int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

void validate_speeds(const std::vector<Rational>& speeds_desc) {
  if (speeds_desc.size() < 3)
    throw std::invalid_argument("need at least three speeds");
  for (std::size_t i = 0; i < speeds_desc.size(); ++i) {
    if (!(speeds_desc[i] > Rational(0)))
      throw std::invalid_argument("speeds must be positive");
    if (i > 0 && !(speeds_desc[i] < speeds_desc[i - 1]))
      throw std::invalid_argument("speeds must be sorted strictly descending");
  }
}

}  // namespace

void WindowSpec::validate() const {
  if (!(caught_speed > Rational(0)))
    throw std::invalid_argument("caught speed must be positive");
  if (!(catcher_speed > caught_speed))
    throw std::invalid_argument("catcher must be strictly faster than caught");
  if (!(catcher_index > caught_index))
    throw std::invalid_argument("catcher must be fired after the caught bullet");
  if (!(max_speed >= catcher_speed))
    throw std::invalid_argument("max speed must dominate the catcher");
}

std::pair<Rational, Rational> collision_point(const WindowSpec& spec) {
  spec.validate();
  const Rational i(spec.catcher_index);
  const Rational j(spec.caught_index);
  Rational t0 = (spec.catcher_speed * i - spec.caught_speed * j) /
                (spec.catcher_speed - spec.caught_speed);
  Rational x0 = spec.caught_speed * (t0 - j);
  return {std::move(t0), std::move(x0)};
}

std::int64_t window_a(const WindowSpec& spec) {
  const auto [t0, x0] = collision_point(spec);
  // s1 (t0 - k) > x0  <=>  k < t0 - x0/s1; take the largest such integer.
  const Rational bound = t0 - x0 / spec.max_speed;
  long long k_max = bound.floor_int64();
  if (bound.is_integer()) k_max -= 1;  // strict inequality
  if (k_max < spec.catcher_index) return 0;
  return k_max - spec.catcher_index;
}

std::int64_t h_of_m(const std::vector<Rational>& speeds_desc, std::int64_t m) {
  validate_speeds(speeds_desc);
  if (m < 2) throw std::invalid_argument("h(m) is defined for m >= 2");
  WindowSpec spec;
  spec.catcher_speed = speeds_desc[1];
  spec.caught_speed = speeds_desc.back();
  spec.catcher_index = 2 * m + 1;
  spec.caught_index = 2;
  spec.max_speed = speeds_desc.front();
  return window_a(spec);
}

std::int64_t m_zero(const std::vector<Rational>& speeds_desc,
                    std::int64_t scan_limit) {
  validate_speeds(speeds_desc);
  for (std::int64_t m = 2; m <= scan_limit; ++m)
    if (h_of_m(speeds_desc, m) > 1) return m;
  throw std::runtime_error("m_zero: no m <= scan limit with h(m) > 1");
}

Rational epsilon_event(const SpeedLaw& mu) {
  if (!mu.is_atomic() || mu.size() < 3)
    throw std::invalid_argument("epsilon_event needs an atomic law on >= 3 speeds");
  std::vector<Rational> speeds;
  for (const auto& a : mu.atoms()) speeds.push_back(a.speed);
  const std::int64_t m0 = m_zero(speeds);
  const std::int64_t h = h_of_m(speeds, m0);
  const Rational& p1 = mu.atoms().front().prob;
  const Rational& p2 = mu.atoms()[1].prob;
  const Rational& pn = mu.atoms().back().prob;
  return pow(p1, static_cast<unsigned long>(m0 - 1)) *
         pow(pn, static_cast<unsigned long>(m0)) *
         pow(p2, static_cast<unsigned long>(h));
}

bool threshold_holds(const Rational& p1, const Rational& p2,
                     const Rational& eps) {
  if (p1.sign() < 0 || p2.sign() < 0 || eps.sign() < 0 ||
      Rational(1) < p1 + p2)
    throw std::invalid_argument("threshold_holds: invalid probabilities");
  return p1 < p2 + eps * (Rational(1) - p1 - p2);
}

MuDelta find_mu_delta(const std::vector<Rational>& speeds_desc,
                      unsigned dyadic_bits) {
  validate_speeds(speeds_desc);
  const auto n = static_cast<long long>(speeds_desc.size());
  const std::int64_t m0 = m_zero(speeds_desc);
  const std::int64_t h = h_of_m(speeds_desc, m0);
  const Rational inv_n(1, n);

  const auto holds = [&](const Rational& delta) {
    const Rational p1 = inv_n;
    const Rational p2 = inv_n - delta;
    const Rational pn = inv_n + delta;
    const Rational eps = pow(p1, static_cast<unsigned long>(m0 - 1)) *
                         pow(pn, static_cast<unsigned long>(m0)) *
                         pow(p2, static_cast<unsigned long>(h));
    return threshold_holds(p1, p2, eps);
  };

  const long long denom = 1LL << dyadic_bits;
  // delta = a / 2^bits, a in [0, floor(2^bits / (2n))]; the inequality holds
  // at 0 and fails once delta eats too much of p2, so bisect the boundary.
  long long a_max = denom / (2 * n);
  long long lo = 0;  // holds
  long long hi = a_max + 1;
  if (holds(Rational(a_max, denom))) {
    lo = a_max;
  } else {
    hi = a_max;
    while (lo + 1 < hi) {
      const long long mid = lo + (hi - lo) / 2;
      if (holds(Rational(mid, denom)))
        lo = mid;
      else
        hi = mid;
    }
  }
  if (lo == 0)
    throw std::runtime_error("find_mu_delta: no positive dyadic delta at this precision");

  MuDelta out;
  out.delta0 = Rational(lo, denom);
  std::vector<std::pair<Rational, Rational>> atoms;
  for (std::size_t i = 0; i < speeds_desc.size(); ++i) {
    Rational p = inv_n;
    if (i == 1) p = inv_n - out.delta0;
    if (i + 1 == speeds_desc.size()) p = inv_n + out.delta0;
    atoms.emplace_back(speeds_desc[i], p);
  }
  out.mu = SpeedLaw::atomic(std::move(atoms));
  return out;
}

// ---------------------------------------------------------------------------
// Operator A
// ---------------------------------------------------------------------------

SupportDistribution SupportDistribution::delta_one(std::size_t K) {
  if (K < 2) throw std::invalid_argument("truncation must be >= 2");
  SupportDistribution d;
  d.trunc = K;
  d.mass.assign(K + 1, 0.0);
  d.mass[1] = 1.0;
  return d;
}

double SupportDistribution::finite_total() const {
  double s = 0.0;
  for (std::size_t k = 1; k <= trunc; ++k) s += mass[k];
  return s;
}

double SupportDistribution::cdf(std::size_t k) const {
  double s = 0.0;
  for (std::size_t i = 1; i <= k && i <= trunc; ++i) s += mass[i];
  return s;
}

SupportDistribution apply_operator_A(const SupportDistribution& d, double p1,
                                     double p2, double eps, int workers) {
  if (!(p1 >= 0.0 && p2 >= 0.0 && p1 + p2 <= 1.0 + 1e-12))
    throw std::invalid_argument("apply_operator_A: invalid probabilities");
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("apply_operator_A: invalid epsilon");
  const std::size_t K = d.trunc;
  const double q = 1.0 - p1 - p2;
  const double two_copies = p2 + q * eps;  // branch weight of T1 + T2
  const double one_copy = q * (1.0 - eps);

  SupportDistribution out;
  out.trunc = K;
  out.mass.assign(K + 1, 0.0);

  const auto n = static_cast<long long>(K);
#pragma omp parallel for num_threads(resolve_workers(workers)) \
    schedule(static)
  for (long long j = 1; j <= n; ++j) {
    // (d * d)(j): both summands finite and within truncation.
    double conv = 0.0;
    for (long long i = 1; i < j; ++i) conv += d.mass[i] * d.mass[j - i];
    double v = two_copies * conv + one_copy * d.mass[j];
    if (j == 1) v += p1;
    out.mass[j] = v;
  }
  out.overflow = std::max(0.0, 1.0 - out.finite_total());
  return out;
}

IterateResult iterate_A(double p1, double p2, double eps,
                        std::size_t iterations, std::size_t trunc,
                        int workers) {
  IterateResult res;
  SupportDistribution d = SupportDistribution::delta_one(trunc);
  for (std::size_t it = 0; it < iterations; ++it) {
    SupportDistribution next = apply_operator_A(d, p1, p2, eps, workers);
    res.overflow_by_iteration.push_back(next.overflow);
    ++res.iterations_run;

    // Stochastic increase from below: CDFs pointwise nonincreasing.
    double cum_next = 0.0, cum_prev = 0.0;
    bool same = next.overflow == d.overflow;
    for (std::size_t k = 1; k <= trunc; ++k) {
      cum_next += next.mass[k];
      cum_prev += d.mass[k];
      if (cum_next > cum_prev + 1e-12) res.monotone = false;
      if (next.mass[k] != d.mass[k]) same = false;
    }
    d = std::move(next);
    if (same) {
      res.reached_fixpoint = true;
      break;
    }
  }
  res.final = std::move(d);
  return res;
}

// ---------------------------------------------------------------------------
// Lazy biased walk
// ---------------------------------------------------------------------------

WalkParams::WalkParams(double l, double r, double z) : left(l), right(r), lazy(z) {
  if (!(l >= 0.0 && r >= 0.0 && z >= 0.0))
    throw std::invalid_argument("walk probabilities must be nonnegative");
  if (std::abs(l + r + z - 1.0) > 1e-12)
    throw std::invalid_argument("walk probabilities must sum to 1");
  if (!(r > 0.0)) throw std::invalid_argument("walk needs right probability > 0");
}

double walk_extinction(const WalkParams& w) {
  return std::min(1.0, w.left / w.right);
}

double walk_return_pgf(const WalkParams& w, double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("walk_return_pgf: x must lie in [0,1]");
  const double b = 1.0 - w.lazy;
  const double disc = b * b - 4.0 * w.left * w.right * x;
  if (disc < 0.0)
    throw std::domain_error("walk_return_pgf: negative discriminant");
  // "-" branch: continuous in x with f(0) = 0.
  return (b - std::sqrt(disc)) / (2.0 * w.right);
}

BinomialEstimate walk_simulate(const WalkParams& w, std::uint64_t max_steps,
                               std::uint64_t reps, std::uint64_t master_seed,
                               int workers, double level,
                               std::vector<std::uint8_t>* per_rep_hit) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (per_rep_hit) per_rep_hit->assign(reps, 0);

  std::uint64_t hits = 0;
  const auto total = static_cast<long long>(reps);
#pragma omp parallel num_threads(resolve_workers(workers))
  {
    std::uint64_t local = 0;
#pragma omp for schedule(dynamic, 256) nowait
    for (long long rep = 0; rep < total; ++rep) {
      RandomStream stream(master_seed, static_cast<std::uint64_t>(rep));
      std::int64_t pos = 1;
      bool hit = false;
      for (std::uint64_t step = 0; step < max_steps; ++step) {
        // The walk cannot get back in the remaining budget.
        if (pos > static_cast<std::int64_t>(max_steps - step)) break;
        const double u = stream.uniform01();
        if (u < w.left)
          --pos;
        else if (u < w.left + w.right)
          ++pos;
        if (pos == 0) {
          hit = true;
          break;
        }
      }
      if (hit) {
        ++local;
        if (per_rep_hit) (*per_rep_hit)[static_cast<std::size_t>(rep)] = 1;
      }
    }
#pragma omp critical
    hits += local;
  }
  return wilson_estimate(hits, reps, level);
}

}  // namespace annihilate::theory
