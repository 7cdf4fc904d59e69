#include "annihilate/exact.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "annihilate/engine.hpp"

namespace annihilate::exact {

namespace {

int resolve_workers(int workers) {
  return workers > 0 ? workers : omp_get_max_threads();
}

}  // namespace

std::vector<SurvivorDistribution> qn_table(std::size_t n_max) {
  // Integer rows Q_n(k) = n! * q_n(k):
  //   Q_n(k) = Q_{n-1}(k-1) + (n-1)^2 Q_{n-2}(k).
  std::vector<std::vector<Rational>> rows(n_max + 1);
  rows[0] = {Rational(1)};
  if (n_max >= 1) rows[1] = {Rational(0), Rational(1)};
  for (std::size_t n = 2; n <= n_max; ++n) {
    rows[n].assign(n + 1, Rational(0));
    const Rational w(static_cast<long long>((n - 1) * (n - 1)));
    for (std::size_t k = n % 2; k <= n; k += 2) {
      Rational v(0);
      if (k >= 1) v += rows[n - 1][k - 1];
      if (k <= n - 2) v += w * rows[n - 2][k];
      rows[n][k] = std::move(v);
    }
  }

  std::vector<SurvivorDistribution> out(n_max + 1);
  Rational fact(1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) fact *= Rational(static_cast<long long>(n));
    out[n].n = n;
    out[n].mass.assign(n + 1, Rational(0));
    for (std::size_t k = n % 2; k <= n; k += 2)
      out[n].mass[k] = rows[n][k] / fact;
  }
  return out;
}

SurvivorDistribution qn(std::size_t n) { return qn_table(n).back(); }

Rational nazarov(std::size_t m) {
  if (m < 1) throw std::invalid_argument("nazarov: m must be >= 1");
  Rational prod(1);
  for (std::size_t i = 1; i <= m; ++i)
    prod *= Rational(2 * static_cast<long long>(i) - 1,
                     2 * static_cast<long long>(i));
  return prod;
}

Rational brute_force_first_survival(const SpeedLaw& law,
                                    const Rational& first_speed,
                                    std::size_t n, const Rational& horizon,
                                    std::uint64_t max_configurations,
                                    int workers) {
  if (!law.is_atomic())
    throw std::invalid_argument("brute force enumeration needs an atomic law");
  if (n < 1) throw std::invalid_argument("brute force: n must be >= 1");
  require_in_support(law, first_speed);

  const std::size_t s = law.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (total > max_configurations / s)
      throw EnumerationGuard(
          "enumeration guard exceeded: " + std::to_string(s) + "^" +
          std::to_string(n - 1) + " configurations");
    total *= s;
  }

  const auto scaled = engine::ScaledLaw::make(law);
  const bool use_scaled =
      scaled && scaled->fits(std::max<std::int64_t>(
                    static_cast<std::int64_t>(n), horizon.floor_int64() + 1));
  const std::int64_t hs =
      use_scaled ? (Rational(scaled->D) * horizon).floor_int64() : 0;
  const std::size_t lead_idx = *law.atom_index(first_speed);

  // Partial sums per leading assignment of bullet 2; rational addition is
  // exact, the fixed combine order below just keeps runs reproducible.
  const std::size_t branches = n >= 2 ? s : 1;
  std::vector<Rational> partial(branches, Rational(0));

#pragma omp parallel for num_threads(resolve_workers(workers)) \
    schedule(dynamic, 1)
  for (long long lead = 0; lead < static_cast<long long>(branches); ++lead) {
    std::vector<std::size_t> digits(n >= 2 ? n - 1 : 0, 0);
    if (!digits.empty()) digits[0] = static_cast<std::size_t>(lead);
    Rational sum(0);
    for (;;) {
      Rational weight(1);
      for (std::size_t d : digits) weight *= law.atoms()[d].prob;
      if (!weight.is_zero()) {
        bool alive;
        if (use_scaled) {
          std::vector<engine::detail::ScaledKin::Body> bodies(n);
          bodies[0] = {1, scaled->a[lead_idx]};
          for (std::size_t i = 0; i < digits.size(); ++i)
            bodies[i + 1] = {static_cast<std::int64_t>(i) + 2,
                             scaled->a[digits[i]]};
          engine::detail::ScaledKin kin{scaled->L, scaled->D};
          engine::detail::CoreOptions opt;
          opt.stop_after_death = 0;
          auto res = engine::detail::simulate<engine::detail::ScaledKin>(
              kin, bodies, hs, opt);
          alive = res.group_of[0] < 0;
        } else {
          std::vector<Bullet<Rational>> bullets(n);
          bullets[0] = {1, Rational(1), first_speed};
          for (std::size_t i = 0; i < digits.size(); ++i)
            bullets[i + 1] = {static_cast<std::int64_t>(i) + 2,
                              Rational(static_cast<long long>(i) + 2),
                              law.atoms()[digits[i]].speed};
          auto table = engine::run<Rational>(std::move(bullets), horizon);
          alive = table.is_alive(0);
        }
        if (alive) sum += weight;
      }
      // Odometer over digits[1..]; digits[0] is this branch's leading atom.
      std::size_t pos = 1;
      while (pos < digits.size() && ++digits[pos] == s) {
        digits[pos] = 0;
        ++pos;
      }
      if (pos >= digits.size()) break;
    }
    partial[static_cast<std::size_t>(lead)] = std::move(sum);
  }

  Rational result(0);
  for (const auto& p : partial) result += p;
  return result;
}

double EmpiricalSurvivors::total_variation(
    const SurvivorDistribution& ref) const {
  if (counts.size() != ref.mass.size())
    throw std::invalid_argument("histogram and distribution sizes differ");
  if (reps == 0) throw std::invalid_argument("empty histogram");
  double tv = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double emp = static_cast<double>(counts[k]) / static_cast<double>(reps);
    tv += std::abs(emp - ref.mass[k].to_double());
  }
  return 0.5 * tv;
}

EmpiricalSurvivors qn_empirical(std::size_t n, std::uint64_t reps,
                                std::uint64_t master_seed, int workers) {
  if (n < 1) throw std::invalid_argument("qn_empirical: n must be >= 1");
  if (reps < 1) throw std::invalid_argument("qn_empirical: reps must be >= 1");

  EmpiricalSurvivors out;
  out.reps = reps;
  out.counts.assign(n + 1, 0);
  engine::detail::ValueKin<double> kin;
  const auto total = static_cast<long long>(reps);
#pragma omp parallel num_threads(resolve_workers(workers))
  {
    std::vector<std::uint64_t> local(n + 1, 0);
#pragma omp for schedule(dynamic, 64) nowait
    for (long long rep = 0; rep < total; ++rep) {
      RandomStream stream(master_seed, static_cast<std::uint64_t>(rep));
      std::vector<engine::detail::ValueKin<double>::Body> bodies(n);
      for (std::size_t i = 0; i < n; ++i)
        bodies[i] = {static_cast<double>(i + 1), stream.uniform01_open()};
      auto res = engine::detail::simulate<engine::detail::ValueKin<double>>(
          kin, bodies, std::nullopt);
      std::size_t survivors = 0;
      for (auto g : res.group_of)
        if (g < 0) ++survivors;
      ++local[survivors];
    }
#pragma omp critical
    for (std::size_t k = 0; k <= n; ++k) out.counts[k] += local[k];
  }
  return out;
}

BinomialEstimate em_s_estimate(std::size_t m, std::optional<double> first_speed,
                               std::uint64_t reps, std::uint64_t master_seed,
                               int workers, double level) {
  if (m < 1) throw std::invalid_argument("em_s_estimate: m must be >= 1");
  if (first_speed && !(*first_speed > 0.0 && *first_speed <= 1.0))
    throw std::invalid_argument("em_s_estimate: s must lie in (0,1]");
  const std::size_t n = 2 * m;

  std::uint64_t none_survive = 0;
  engine::detail::ValueKin<double> kin;
  const auto total = static_cast<long long>(reps);
#pragma omp parallel num_threads(resolve_workers(workers))
  {
    std::uint64_t local = 0;
#pragma omp for schedule(dynamic, 64) nowait
    for (long long rep = 0; rep < total; ++rep) {
      RandomStream stream(master_seed, static_cast<std::uint64_t>(rep));
      std::vector<engine::detail::ValueKin<double>::Body> bodies(n);
      for (std::size_t i = 0; i < n; ++i)
        bodies[i] = {static_cast<double>(i + 1), stream.uniform01_open()};
      if (first_speed) bodies[0].speed = *first_speed;
      auto res = engine::detail::simulate<engine::detail::ValueKin<double>>(
          kin, bodies, std::nullopt);
      bool any_alive = false;
      for (auto g : res.group_of)
        if (g < 0) any_alive = true;
      if (!any_alive) ++local;
    }
#pragma omp critical
    none_survive += local;
  }
  return wilson_estimate(none_survive, reps, level);
}

}  // namespace annihilate::exact
