#include "annihilate/process.hpp"

#include <algorithm>

namespace annihilate {

SpeedLaw SpeedLaw::atomic(std::vector<std::pair<Rational, Rational>> atoms) {
  if (atoms.empty())
    throw std::invalid_argument("atomic speed law needs at least one atom");
  SpeedLaw law;
  law.atoms_.reserve(atoms.size());
  for (auto& [speed, prob] : atoms) {
    if (!(speed > Rational(0)))
      throw std::invalid_argument("bullet speeds must be positive");
    if (prob.sign() < 0)
      throw std::invalid_argument("atom probabilities must be nonnegative");
    Atom a;
    a.speed = speed;
    a.prob = prob;
    a.speed_d = speed.to_double();
    law.atoms_.push_back(std::move(a));
  }
  std::sort(law.atoms_.begin(), law.atoms_.end(),
            [](const Atom& x, const Atom& y) { return y.speed < x.speed; });
  for (std::size_t i = 1; i < law.atoms_.size(); ++i)
    if (law.atoms_[i].speed == law.atoms_[i - 1].speed)
      throw std::invalid_argument("atomic speed law needs distinct speeds");

  Rational total(0);
  for (const auto& a : law.atoms_) total += a.prob;
  if (total != Rational(1))
    throw std::invalid_argument("probabilities must sum to 1");

  // Integer weights over the common denominator of all probabilities.
  long long denom = 1;
  for (const auto& a : law.atoms_) {
    auto d = a.prob.den_int64();
    if (!d) throw std::invalid_argument("atom probability denominator too large");
    denom = lcm_checked(denom, *d);
  }
  law.weight_denom_ = static_cast<std::uint64_t>(denom);
  std::uint64_t cum = 0;
  for (const auto& a : law.atoms_) {
    Rational w = a.prob * Rational(denom);
    cum += static_cast<std::uint64_t>(*w.num_int64());
    law.cum_weights_.push_back(cum);
  }
  return law;
}

SpeedLaw SpeedLaw::uniform01() { return SpeedLaw{}; }

std::optional<std::size_t> SpeedLaw::atom_index(const Rational& speed) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].speed == speed) return i;
  return std::nullopt;
}

void require_in_support(const SpeedLaw& law, const Rational& speed) {
  if (law.is_atomic() && !law.atom_index(speed))
    throw std::invalid_argument("forced speed " + speed.str() +
                                " is not in the law's support");
  if (!law.is_atomic() &&
      !(speed > Rational(0) && speed <= Rational(1)))
    throw std::invalid_argument("forced speed must lie in (0,1]");
}

template <class N>
std::vector<Bullet<N>> sample_bullets(const SpeedLaw& law,
                                      const SpacingModel& spacing,
                                      std::size_t n,
                                      const std::optional<N>& first_speed,
                                      RandomStream& stream) {
  if (n < 1) throw std::invalid_argument("sample_bullets: n must be >= 1");
  if constexpr (std::is_same_v<N, Rational>) {
    if (!spacing.is_unit())
      throw std::invalid_argument(
          "exact sampling requires unit spacing; exponential gaps are floats");
    if (!law.is_atomic())
      throw std::invalid_argument(
          "exact sampling requires an atomic speed law");
  }

  std::vector<Bullet<N>> out;
  out.reserve(n);
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Bullet<N> b;
    b.index = static_cast<std::int64_t>(i) + 1;
    if (spacing.is_unit()) {
      b.fire_time = detail::NumericOps<N>::from_int(b.index);
    } else {
      t += stream.exponential(spacing.rate);
      if constexpr (std::is_same_v<N, double>) b.fire_time = t;
    }
    if (law.is_atomic()) {
      b.speed = detail::NumericOps<N>::atom_speed(law.atoms()[law.sample_atom(stream)]);
    } else {
      if constexpr (std::is_same_v<N, double>) b.speed = stream.uniform01_open();
    }
    out.push_back(std::move(b));
  }
  if (first_speed) out.front().speed = *first_speed;
  return out;
}

template std::vector<Bullet<Rational>> sample_bullets<Rational>(
    const SpeedLaw&, const SpacingModel&, std::size_t,
    const std::optional<Rational>&, RandomStream&);
template std::vector<Bullet<double>> sample_bullets<double>(
    const SpeedLaw&, const SpacingModel&, std::size_t,
    const std::optional<double>&, RandomStream&);

}  // namespace annihilate
