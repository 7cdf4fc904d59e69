#include "annihilate/survival.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace annihilate::engine {

namespace {

int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

// Runs a parallel replicate loop with integer-count aggregation. The merge
// is commutative integer addition, so the totals are invariant to worker
// count and scheduling.
template <class PerRep>
void parallel_replicates(std::uint64_t reps, int workers, std::size_t counters,
                         std::vector<std::uint64_t>& totals,
                         const PerRep& per_rep) {
  totals.assign(counters, 0);
  std::string error;
  const auto n = static_cast<long long>(reps);
#pragma omp parallel num_threads(resolve_workers(workers))
  {
    std::vector<std::uint64_t> local(counters, 0);
#pragma omp for schedule(dynamic, 16) nowait
    for (long long rep = 0; rep < n; ++rep) {
      try {
        per_rep(static_cast<std::uint64_t>(rep), local);
      } catch (const std::exception& e) {
#pragma omp critical
        error = e.what();
      }
    }
#pragma omp critical
    {
      for (std::size_t i = 0; i < counters; ++i) totals[i] += local[i];
    }
  }
  if (!error.empty()) throw std::runtime_error("replicate failed: " + error);
}

template <class K>
std::optional<typename K::Time> first_catch(
    const K& kin, std::span<const typename K::Body> bodies,
    std::optional<typename K::Time> horizon, std::int32_t watched = 0) {
  detail::CoreOptions opt;
  opt.stop_after_death = watched;
  auto res = detail::simulate<K>(kin, bodies, std::move(horizon), opt);
  if (res.group_of[watched] < 0) return std::nullopt;
  return res.groups[res.group_of[watched]].time;
}

void sample_atoms(const SpeedLaw& law, std::size_t n,
                  std::vector<std::uint32_t>& out, RandomStream& stream) {
  out.clear();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(static_cast<std::uint32_t>(law.sample_atom(stream)));
}

// Bullets fired by the horizon, in the continuous-mode representation.
// Draw order per bullet: spacing gap (exponential only), then one speed
// draw; the overflow gap that crosses the horizon is consumed.
std::vector<detail::ValueKin<double>::Body> sample_bodies_until(
    const SpeedLaw& law, const SpacingModel& spacing, double horizon,
    std::optional<double> first_speed, RandomStream& stream) {
  std::vector<detail::ValueKin<double>::Body> bodies;
  double t = 0.0;
  for (std::int64_t i = 1;; ++i) {
    if (spacing.is_unit()) {
      t = static_cast<double>(i);
      if (t > horizon) break;
    } else {
      t += stream.exponential(spacing.rate);
      if (t > horizon) break;
    }
    const double speed = law.is_atomic()
                             ? law.atoms()[law.sample_atom(stream)].speed_d
                             : stream.uniform01_open();
    bodies.push_back({t, speed});
  }
  if (!bodies.empty() && first_speed) bodies.front().speed = *first_speed;
  return bodies;
}

std::int64_t scaled_horizon(const ScaledLaw& s, const Rational& h) {
  return (Rational(s.D) * h).floor_int64();
}

struct ExactCurveSetup {
  ScaledLaw scaled;
  std::vector<std::int64_t> horizons_scaled;
  std::int64_t n = 0;  // bullets fired by the last horizon (unit spacing)
  std::optional<std::size_t> forced_idx;
};

}  // namespace

// ---------------------------------------------------------------------------
// Single-realization operations
// ---------------------------------------------------------------------------

template <class N>
FirstBulletFate<N> first_bullet_fate(const SpeedLaw& law,
                                     const SpacingModel& spacing,
                                     const std::optional<N>& first_speed,
                                     const N& horizon, RandomStream& stream) {
  FateTable<N> table;
  if constexpr (std::is_same_v<N, Rational>) {
    if (!exact_mode(law, spacing))
      throw std::invalid_argument(
          "exact first_bullet_fate requires an atomic law with unit spacing");
    const long long n = horizon.floor_int64();
    if (n < 1)
      throw std::invalid_argument("horizon precedes the first firing time");
    if (first_speed) require_in_support(law, *first_speed);
    auto bullets = sample_bullets<Rational>(law, spacing, n, first_speed, stream);
    table = run<Rational>(std::move(bullets), horizon);
  } else {
    auto bodies = sample_bodies_until(law, spacing, horizon, first_speed, stream);
    std::vector<Bullet<double>> bullets;
    bullets.reserve(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i)
      bullets.push_back(
          {static_cast<std::int64_t>(i) + 1, bodies[i].fire, bodies[i].speed});
    if (spacing.is_unit() && bullets.empty())
      throw std::invalid_argument("horizon precedes the first firing time");
    table = run<double>(std::move(bullets), horizon);
  }

  FirstBulletFate<N> fate;
  fate.horizon = horizon;
  if (!table.fates.empty() && table.fates[0]) {
    const auto& a = *table.fates[0];
    std::int64_t catcher = 0;
    for (auto idx : a.group)
      if (idx > 1) {
        catcher = idx;
        break;
      }
    fate.caught = typename FirstBulletFate<N>::Caught{catcher, a.time, a.position};
  }
  return fate;
}

template FirstBulletFate<Rational> first_bullet_fate<Rational>(
    const SpeedLaw&, const SpacingModel&, const std::optional<Rational>&,
    const Rational&, RandomStream&);
template FirstBulletFate<double> first_bullet_fate<double>(
    const SpeedLaw&, const SpacingModel&, const std::optional<double>&,
    const double&, RandomStream&);

namespace {

// Shared draw order for one two-sided realization: center speed, then the
// plus side (gap, speed per bullet), then the minus side.
template <class N>
struct TwoSidedDraws {
  N center;
  std::vector<N> plus_speeds;   // speed of bullet +i at [i-1]
  std::vector<N> minus_speeds;  // speed of bullet -i at [i-1]
  std::vector<N> plus_times;    // fire time of bullet +i
  std::vector<N> minus_times;   // fire time of bullet -i (negative)
};

template <class N>
TwoSidedDraws<N> draw_two_sided(const SpeedLaw& law,
                                const SpacingModel& spacing, std::int64_t m,
                                const std::optional<N>& center_speed,
                                RandomStream& stream) {
  TwoSidedDraws<N> d;
  const auto draw_speed = [&]() -> N {
    if constexpr (std::is_same_v<N, Rational>) {
      return law.atoms()[law.sample_atom(stream)].speed;
    } else {
      return law.is_atomic() ? law.atoms()[law.sample_atom(stream)].speed_d
                             : stream.uniform01_open();
    }
  };
  d.center = draw_speed();
  if (center_speed) d.center = *center_speed;
  double t = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) {
    if (spacing.is_unit()) {
      d.plus_times.push_back(annihilate::detail::NumericOps<N>::from_int(i));
    } else {
      t += stream.exponential(spacing.rate);
      if constexpr (std::is_same_v<N, double>) d.plus_times.push_back(t);
    }
    d.plus_speeds.push_back(draw_speed());
  }
  t = 0.0;
  for (std::int64_t i = 1; i <= m; ++i) {
    if (spacing.is_unit()) {
      d.minus_times.push_back(annihilate::detail::NumericOps<N>::from_int(-i));
    } else {
      t -= stream.exponential(spacing.rate);
      if constexpr (std::is_same_v<N, double>) d.minus_times.push_back(t);
    }
    d.minus_speeds.push_back(draw_speed());
  }
  return d;
}

}  // namespace

template <class N>
TwoSidedFates<N> two_sided_fates(const SpeedLaw& law,
                                 const SpacingModel& spacing, std::int64_t m,
                                 const std::optional<N>& center_speed,
                                 RandomStream& stream) {
  if (m < 1) throw std::invalid_argument("two_sided_fates: m must be >= 1");
  if constexpr (std::is_same_v<N, Rational>) {
    if (!exact_mode(law, spacing))
      throw std::invalid_argument(
          "exact two_sided_fates requires an atomic law with unit spacing");
    if (center_speed) require_in_support(law, *center_speed);
  }
  auto d = draw_two_sided<N>(law, spacing, m, center_speed, stream);

  using K = detail::ValueKin<N>;
  K kin;
  std::vector<typename K::Body> bodies;
  bodies.reserve(m + 1);
  // Plus side: center fires first at time 0, bullets +1..+m behind it.
  bodies.push_back({annihilate::detail::NumericOps<N>::from_int(0), d.center});
  for (std::int64_t i = 0; i < m; ++i)
    bodies.push_back({d.plus_times[i], d.plus_speeds[i]});
  TwoSidedFates<N> out;
  out.center_speed = d.center;
  out.survives_plus =
      !first_catch<K>(kin, bodies, std::nullopt, 0).has_value();

  // Minus side: bullets -m..-1 fired before the center, center last.
  bodies.clear();
  for (std::int64_t k = 0; k < m; ++k)
    bodies.push_back({d.minus_times[m - 1 - k], d.minus_speeds[m - 1 - k]});
  bodies.push_back({annihilate::detail::NumericOps<N>::from_int(0), d.center});
  out.survives_minus =
      !first_catch<K>(kin, bodies, std::nullopt,
                      static_cast<std::int32_t>(m))
           .has_value();
  out.survives_both = out.survives_plus && out.survives_minus;
  return out;
}

template TwoSidedFates<Rational> two_sided_fates<Rational>(
    const SpeedLaw&, const SpacingModel&, std::int64_t,
    const std::optional<Rational>&, RandomStream&);
template TwoSidedFates<double> two_sided_fates<double>(
    const SpeedLaw&, const SpacingModel&, std::int64_t,
    const std::optional<double>&, RandomStream&);

// ---------------------------------------------------------------------------
// survival_curve
// ---------------------------------------------------------------------------

std::vector<CurvePoint> survival_curve(const SpeedLaw& law,
                                       const SpacingModel& spacing,
                                       const std::optional<Rational>& first_speed,
                                       const std::vector<Rational>& horizons,
                                       std::uint64_t reps,
                                       std::uint64_t master_seed, int workers,
                                       double level,
                                       std::vector<std::uint8_t>* shard_bits) {
  if (horizons.empty()) throw std::invalid_argument("no horizons given");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (!(horizons[i - 1] < horizons[i]))
      throw std::invalid_argument("horizons must be strictly ascending");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (first_speed) require_in_support(law, *first_speed);

  const std::size_t H = horizons.size();
  std::vector<std::uint64_t> alive_counts;
  const Rational& hmax = horizons.back();
  if (shard_bits) shard_bits->assign(reps * H, 0);
  const auto record = [&](std::uint64_t rep, std::size_t k,
                          std::vector<std::uint64_t>& local) {
    ++local[k];
    if (shard_bits) (*shard_bits)[rep * H + k] = 1;
  };

  if (exact_mode(law, spacing)) {
    const std::int64_t n = hmax.floor_int64();
    if (n < 1)
      throw std::invalid_argument("horizon precedes the first firing time");
    auto scaled = ScaledLaw::make(law);
    const std::optional<std::size_t> forced_idx =
        first_speed ? law.atom_index(*first_speed) : std::nullopt;

    if (scaled && scaled->fits(std::max<std::int64_t>(n, hmax.floor_int64() + 1))) {
      detail::ScaledKin kin{scaled->L, scaled->D};
      std::vector<std::int64_t> hsc(H);
      for (std::size_t k = 0; k < H; ++k) hsc[k] = scaled_horizon(*scaled, horizons[k]);
      const auto& atom_a = scaled->a;
      parallel_replicates(
          reps, workers, H, alive_counts,
          [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
            RandomStream stream(master_seed, rep);
            std::vector<std::uint32_t> idx;
            sample_atoms(law, static_cast<std::size_t>(n), idx, stream);
            if (forced_idx) idx[0] = static_cast<std::uint32_t>(*forced_idx);
            std::vector<detail::ScaledKin::Body> bodies(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i)
              bodies[i] = {static_cast<std::int64_t>(i) + 1, atom_a[idx[i]]};
            const auto t = first_catch(kin, std::span(bodies), hsc.back());
            for (std::size_t k = 0; k < H; ++k)
              if (!t || *t > hsc[k]) record(rep, k, local);
          });
    } else {
      // General exact fallback for laws whose scaled form overflows int64.
      detail::ValueKin<Rational> kin;
      parallel_replicates(
          reps, workers, H, alive_counts,
          [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
            RandomStream stream(master_seed, rep);
            auto bullets = sample_bullets<Rational>(
                law, spacing, static_cast<std::size_t>(n), first_speed, stream);
            std::vector<detail::ValueKin<Rational>::Body> bodies;
            bodies.reserve(bullets.size());
            for (auto& b : bullets) bodies.push_back({b.fire_time, b.speed});
            const auto t = first_catch(kin, std::span(bodies),
                                       std::optional<Rational>(hmax));
            for (std::size_t k = 0; k < H; ++k)
              if (!t || *t > horizons[k]) record(rep, k, local);
          });
    }
  } else {
    const double hmax_d = hmax.to_double();
    std::vector<double> hd(H);
    for (std::size_t k = 0; k < H; ++k) hd[k] = horizons[k].to_double();
    const std::optional<double> forced_d =
        first_speed ? std::optional<double>(first_speed->to_double())
                    : std::nullopt;
    detail::ValueKin<double> kin;
    parallel_replicates(
        reps, workers, H, alive_counts,
        [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
          RandomStream stream(master_seed, rep);
          auto bodies =
              sample_bodies_until(law, spacing, hmax_d, forced_d, stream);
          std::optional<double> t;
          if (!bodies.empty())
            t = first_catch(kin, std::span(bodies), hmax_d);
          for (std::size_t k = 0; k < H; ++k)
            if (!t || *t > hd[k]) record(rep, k, local);
        });
  }

  std::vector<CurvePoint> curve;
  curve.reserve(H);
  for (std::size_t k = 0; k < H; ++k)
    curve.push_back(
        {horizons[k], wilson_estimate(alive_counts[k], reps, level)});
  return curve;
}

// ---------------------------------------------------------------------------
// two_sided_estimate
// ---------------------------------------------------------------------------

TwoSidedEstimate two_sided_estimate(const SpeedLaw& law,
                                    const SpacingModel& spacing,
                                    std::int64_t half_width,
                                    const std::optional<Rational>& center_speed,
                                    std::uint64_t reps,
                                    std::uint64_t master_seed, int workers,
                                    double level,
                                    std::vector<std::uint8_t>* shard_bits) {
  if (half_width < 1) throw std::invalid_argument("half_width must be >= 1");
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (center_speed) require_in_support(law, *center_speed);

  std::vector<std::uint64_t> counts;  // plus, minus, both
  if (shard_bits) shard_bits->assign(reps * 3, 0);
  const auto record3 = [&](std::uint64_t rep, bool p, bool q,
                           std::vector<std::uint64_t>& local) {
    if (p) ++local[0];
    if (q) ++local[1];
    if (p && q) ++local[2];
    if (shard_bits) {
      (*shard_bits)[rep * 3 + 0] = p;
      (*shard_bits)[rep * 3 + 1] = q;
      (*shard_bits)[rep * 3 + 2] = p && q;
    }
  };
  const bool exact = exact_mode(law, spacing);
  std::optional<ScaledLaw> scaled;
  if (exact) scaled = ScaledLaw::make(law);

  if (exact && scaled && scaled->fits(half_width)) {
    detail::ScaledKin kin{scaled->L, scaled->D};
    const auto& atom_a = scaled->a;
    const std::optional<std::size_t> forced_idx =
        center_speed ? law.atom_index(*center_speed) : std::nullopt;
    const auto m = half_width;
    parallel_replicates(
        reps, workers, 3, counts,
        [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
          RandomStream stream(master_seed, rep);
          std::size_t center = law.sample_atom(stream);
          if (forced_idx) center = *forced_idx;
          std::vector<std::uint32_t> plus, minus;
          sample_atoms(law, static_cast<std::size_t>(m), plus, stream);
          sample_atoms(law, static_cast<std::size_t>(m), minus, stream);

          std::vector<detail::ScaledKin::Body> bodies;
          bodies.reserve(m + 1);
          bodies.push_back({0, atom_a[center]});
          for (std::int64_t i = 0; i < m; ++i)
            bodies.push_back({i + 1, atom_a[plus[i]]});
          const bool p = !first_catch(kin, std::span(bodies), std::nullopt).has_value();

          bodies.clear();
          for (std::int64_t k = 0; k < m; ++k)
            bodies.push_back({-m + k, atom_a[minus[m - 1 - k]]});
          bodies.push_back({0, atom_a[center]});
          const bool q =
              !first_catch(kin, std::span(bodies), std::nullopt,
                           static_cast<std::int32_t>(m))
                   .has_value();
          record3(rep, p, q, local);
        });
  } else {
    const std::optional<Rational> forced_r = center_speed;
    parallel_replicates(
        reps, workers, 3, counts,
        [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
          RandomStream stream(master_seed, rep);
          if (exact) {
            auto f = two_sided_fates<Rational>(law, spacing, half_width,
                                               forced_r, stream);
            record3(rep, f.survives_plus, f.survives_minus, local);
          } else {
            std::optional<double> fd;
            if (forced_r) fd = forced_r->to_double();
            auto f = two_sided_fates<double>(law, spacing, half_width, fd,
                                             stream);
            record3(rep, f.survives_plus, f.survives_minus, local);
          }
        });
  }

  TwoSidedEstimate out;
  out.plus = wilson_estimate(counts[0], reps, level);
  out.minus = wilson_estimate(counts[1], reps, level);
  out.both = wilson_estimate(counts[2], reps, level);
  return out;
}

// ---------------------------------------------------------------------------
// monotone_coupling_check
// ---------------------------------------------------------------------------

std::uint64_t monotone_coupling_check(const SpeedLaw& law,
                                      const SpacingModel& spacing,
                                      const Rational& s_lo,
                                      const Rational& s_hi,
                                      const Rational& horizon,
                                      std::uint64_t reps,
                                      std::uint64_t master_seed, int workers) {
  if (!(s_lo <= s_hi))
    throw std::invalid_argument("coupling check needs s_lo <= s_hi");
  require_in_support(law, s_lo);
  require_in_support(law, s_hi);
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");

  std::vector<std::uint64_t> counts;  // violations
  if (exact_mode(law, spacing)) {
    const std::int64_t n = horizon.floor_int64();
    if (n < 1)
      throw std::invalid_argument("horizon precedes the first firing time");
    auto scaled = ScaledLaw::make(law);
    if (!scaled || !scaled->fits(std::max<std::int64_t>(n, 1)))
      throw std::runtime_error("speed law too large for the scaled engine");
    detail::ScaledKin kin{scaled->L, scaled->D};
    const auto& atom_a = scaled->a;
    const std::int64_t lo_a = atom_a[*law.atom_index(s_lo)];
    const std::int64_t hi_a = atom_a[*law.atom_index(s_hi)];
    const std::int64_t hs = scaled_horizon(*scaled, horizon);
    parallel_replicates(
        reps, workers, 1, counts,
        [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
          RandomStream stream(master_seed, rep);
          std::vector<std::uint32_t> idx;
          sample_atoms(law, static_cast<std::size_t>(n), idx, stream);
          std::vector<detail::ScaledKin::Body> bodies(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i)
            bodies[i] = {static_cast<std::int64_t>(i) + 1, atom_a[idx[i]]};
          bodies[0].a = lo_a;
          const bool lo_alive =
              !first_catch(kin, std::span(bodies), hs).has_value();
          bodies[0].a = hi_a;
          const bool hi_alive =
              !first_catch(kin, std::span(bodies), hs).has_value();
          if (lo_alive && !hi_alive) ++local[0];
        });
  } else {
    const double hd = horizon.to_double();
    const double lo_d = s_lo.to_double();
    const double hi_d = s_hi.to_double();
    detail::ValueKin<double> kin;
    parallel_replicates(
        reps, workers, 1, counts,
        [&](std::uint64_t rep, std::vector<std::uint64_t>& local) {
          RandomStream stream(master_seed, rep);
          auto bodies =
              sample_bodies_until(law, spacing, hd, std::nullopt, stream);
          if (bodies.empty()) return;
          bodies[0].speed = lo_d;
          const bool lo_alive =
              !first_catch(kin, std::span(bodies), hd).has_value();
          bodies[0].speed = hi_d;
          const bool hi_alive =
              !first_catch(kin, std::span(bodies), hd).has_value();
          if (lo_alive && !hi_alive) ++local[0];
        });
  }
  return counts[0];
}

}  // namespace annihilate::engine
