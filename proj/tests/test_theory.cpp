#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "annihilate/rng.hpp"
#include "annihilate/theory.hpp"

using annihilate::Rational;
using annihilate::RandomStream;
using annihilate::SpeedLaw;
namespace theory = annihilate::theory;

namespace {

const std::vector<Rational> kHalves = {Rational(3), Rational(3, 2), Rational(1)};
const std::vector<Rational> kInts = {Rational(3), Rational(2), Rational(1)};

SpeedLaw uniform_on(const std::vector<Rational>& speeds) {
  std::vector<std::pair<Rational, Rational>> atoms;
  for (const auto& s : speeds)
    atoms.emplace_back(s, Rational(1, static_cast<long long>(speeds.size())));
  return SpeedLaw::atomic(std::move(atoms));
}

}  // namespace

TEST_CASE("collision_point: substitution checks") {
  theory::WindowSpec spec{Rational(3, 2), Rational(1), 5, 2, Rational(3)};
  auto [t0, x0] = theory::collision_point(spec);
  CHECK(t0 == Rational(11));
  CHECK(x0 == Rational(9));

  spec.catcher_index = 7;
  std::tie(t0, x0) = theory::collision_point(spec);
  CHECK(t0 == Rational(17));
  CHECK(x0 == Rational(15));

  theory::WindowSpec equal{Rational(1), Rational(1), 5, 2, Rational(3)};
  CHECK_THROWS_AS(theory::collision_point(equal), std::invalid_argument);
}

TEST_CASE("window_a: worked examples and the no-slot case") {
  theory::WindowSpec spec{Rational(3, 2), Rational(1), 5, 2, Rational(3)};
  CHECK(theory::window_a(spec) == 2);  // 3(11-k) > 9 -> k < 8, so k_max = 7

  spec.catcher_index = 7;
  CHECK(theory::window_a(spec) == 4);  // 3(17-k) > 15 -> k < 12, k_max = 11

  // Catcher at the maximal speed: the window can close entirely.
  theory::WindowSpec fast{Rational(3), Rational(1), 3, 2, Rational(3)};
  CHECK(theory::window_a(fast) >= 0);
}

TEST_CASE("h_of_m: values, closed form 2m-2 for {1,3/2,3}, monotone growth") {
  CHECK(theory::h_of_m(kHalves, 2) == 2);
  CHECK(theory::h_of_m(kHalves, 3) == 4);
  for (std::int64_t m = 2; m <= 100; ++m)
    CHECK(theory::h_of_m(kHalves, m) == 2 * m - 2);

  std::int64_t prev = theory::h_of_m(kHalves, 2);
  std::int64_t prev_i = theory::h_of_m(kInts, 2);
  for (std::int64_t m = 3; m <= 100; ++m) {
    const auto h = theory::h_of_m(kHalves, m);
    CHECK(h >= prev);
    prev = h;
    const auto hi = theory::h_of_m(kInts, m);
    CHECK(hi >= prev_i);
    prev_i = hi;
  }
  CHECK(prev > 50);  // unbounded growth within the scan
}

TEST_CASE("m_zero: scan results") {
  CHECK(theory::m_zero(kHalves) == 2);  // h(2) = 2 > 1
  // For {1,2,3}: h(2)=0, h(3)=1, h(4)=2 -> m0 = 4.
  CHECK(theory::h_of_m(kInts, 2) == 0);
  CHECK(theory::h_of_m(kInts, 3) == 1);
  CHECK(theory::h_of_m(kInts, 4) == 2);
  CHECK(theory::m_zero(kInts) == 4);
}

TEST_CASE("epsilon_event: 1/243 for uniform {1,3/2,3} and the nu form") {
  CHECK(theory::epsilon_event(uniform_on(kHalves)) == Rational(1, 243));

  // mu = {3: (1-p)/2, 3/2: p, 1: (1-p)/2} gives ((1-p)/2)^3 p^2.
  for (long long num : {1, 2, 5}) {
    const Rational p(num, 10);
    const Rational side = (Rational(1) - p) / Rational(2);
    auto law = SpeedLaw::atomic(
        {{Rational(3), side}, {Rational(3, 2), p}, {Rational(1), side}});
    CHECK(theory::epsilon_event(law) == annihilate::pow(side, 3) * p * p);
  }

  // Zero mass on s2 forces epsilon = 0.
  auto degenerate = SpeedLaw::atomic({{Rational(3), Rational(1, 2)},
                                      {Rational(3, 2), Rational(0)},
                                      {Rational(1), Rational(1, 2)}});
  CHECK(theory::epsilon_event(degenerate).is_zero());
}

TEST_CASE("threshold_holds: strict inequality") {
  CHECK(theory::threshold_holds(Rational(1, 3), Rational(1, 3),
                                Rational(1, 243)));
  CHECK(!theory::threshold_holds(Rational(1, 2), Rational(1, 4),
                                 Rational(1, 1000000)));
  // Equal p1 = p2 with positive epsilon and slack: strict yes.
  CHECK(theory::threshold_holds(Rational(1, 4), Rational(1, 4), Rational(1, 100)));
  // Epsilon zero and p1 = p2: strictness fails.
  CHECK(!theory::threshold_holds(Rational(1, 4), Rational(1, 4), Rational(0)));
}

TEST_CASE("find_mu_delta: positive dyadic delta, boundary tight, mu valid") {
  auto md = theory::find_mu_delta(kHalves);
  CHECK(md.delta0 > Rational(0));
  CHECK(md.delta0 <= Rational(1, 6));
  // mu(s2) < mu(s1), masses sum to 1.
  CHECK(md.mu.atoms()[1].prob < md.mu.atoms()[0].prob);
  Rational total(0);
  for (const auto& a : md.mu.atoms()) total += a.prob;
  CHECK(total == Rational(1));

  // delta0 satisfies the inequality; one dyadic step further fails.
  const auto holds_at = [&](const Rational& delta) {
    const Rational p1(1, 3), p2 = Rational(1, 3) - delta,
                   pn = Rational(1, 3) + delta;
    const Rational eps = p1 * pn * pn * p2 * p2;  // m0 = 2, h = 2
    return theory::threshold_holds(p1, p2, eps);
  };
  CHECK(holds_at(md.delta0));
  CHECK(!holds_at(md.delta0 + Rational(1, 1 << 20)));
}

TEST_CASE("operator A on delta_1: direct case analysis") {
  const double p1 = 0.3, p2 = 0.25, eps = 0.125;
  auto d = theory::SupportDistribution::delta_one(16);
  auto out = theory::apply_operator_A(d, p1, p2, eps);
  const double q = 1.0 - p1 - p2;
  CHECK(out.mass[1] == doctest::Approx(p1 + q * (1 - eps)).epsilon(1e-12));
  CHECK(out.mass[2] == doctest::Approx(p2 + q * eps).epsilon(1e-12));
  CHECK(out.overflow == doctest::Approx(0.0));

  // eps = 0 degenerates to {1: 1-p2, 2: p2}.
  auto flat = theory::apply_operator_A(d, p1, p2, 0.0);
  CHECK(flat.mass[1] == doctest::Approx(1.0 - p2).epsilon(1e-12));
  CHECK(flat.mass[2] == doctest::Approx(p2).epsilon(1e-12));
}

TEST_CASE("operator A conserves mass and preserves stochastic dominance") {
  RandomStream rng(123, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t K = 24;
    theory::SupportDistribution d, e;
    d.trunc = e.trunc = K;
    d.mass.assign(K + 1, 0.0);
    e.mass.assign(K + 1, 0.0);
    double sd = 0, se = 0;
    for (std::size_t k = 1; k <= K; ++k) {
      d.mass[k] = rng.uniform01();
      e.mass[k] = rng.uniform01();
      sd += d.mass[k];
      se += e.mass[k];
    }
    const double keep_d = 0.9, keep_e = 0.85;
    for (std::size_t k = 1; k <= K; ++k) {
      d.mass[k] *= keep_d / sd;
      e.mass[k] *= keep_e / se;
    }
    d.overflow = 1.0 - keep_d;
    e.overflow = 1.0 - keep_e;

    const double p1 = 0.2, p2 = 0.35, eps = 0.01;
    auto od = theory::apply_operator_A(d, p1, p2, eps);
    CHECK(od.finite_total() + od.overflow == doctest::Approx(1.0).epsilon(1e-9));

    // Force e to dominate d (shift mass upward), then check A keeps it.
    theory::SupportDistribution hi = d;
    for (std::size_t k = K; k >= 2; --k) {
      const double moved = hi.mass[k - 1] * 0.5;
      hi.mass[k - 1] -= moved;
      hi.mass[k] += moved;
    }
    auto oh = theory::apply_operator_A(hi, p1, p2, eps);
    for (std::size_t k = 1; k <= K; ++k)
      CHECK(oh.cdf(k) <= od.cdf(k) + 1e-9);
  }
}

TEST_CASE("iterate_A: one step from delta_1 and monotone convergence") {
  const double p1 = 1.0 / 3, p2 = 1.0 / 3, eps = 1.0 / 243;
  auto res = theory::iterate_A(p1, p2, eps, 1, 64);
  auto manual = theory::apply_operator_A(
      theory::SupportDistribution::delta_one(64), p1, p2, eps);
  for (std::size_t k = 1; k <= 64; ++k)
    CHECK(res.final.mass[k] == manual.mass[k]);

  auto deep = theory::iterate_A(p1, p2, eps, 400, 256);
  CHECK(deep.monotone);
  CHECK(deep.final.overflow >= 0.0);
}

TEST_CASE("iterate_A overflow approaches the gambler's-ruin limit") {
  // Supercritical: l < r.
  const double p1 = 0.25, p2 = 0.40, eps = 0.1;
  const double r = p2 + eps * (1 - p1 - p2);
  auto res = theory::iterate_A(p1, p2, eps, 800, 800);
  CHECK(res.final.overflow ==
        doctest::Approx(1.0 - std::min(1.0, p1 / r)).epsilon(1e-6));

  // Subcritical: almost-sure return, overflow drains to 0.
  auto sub = theory::iterate_A(0.45, 0.25, 0.02, 800, 800);
  CHECK(sub.final.overflow == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("walk_extinction: closed form") {
  CHECK(theory::walk_extinction({0.3, 0.3, 0.4}) == 1.0);
  CHECK(theory::walk_extinction({0.2, 0.4, 0.4}) == doctest::Approx(0.5));
  CHECK(theory::walk_extinction({0.5, 0.25, 0.25}) == 1.0);
  CHECK_THROWS_AS(theory::WalkParams(0.5, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(theory::WalkParams(0.5, 0.2, 0.2), std::invalid_argument);
}

TEST_CASE("walk_return_pgf: defining equation, endpoints, extinction limit") {
  const theory::WalkParams w{0.2, 0.4, 0.4};
  CHECK(theory::walk_return_pgf(w, 0.0) == 0.0);
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double f = theory::walk_return_pgf(w, x);
    const double residual = f - (w.left * x + w.right * f * f + w.lazy * f);
    CHECK(std::abs(residual) < 1e-12);
  }
  CHECK(theory::walk_return_pgf(w, 1.0) ==
        doctest::Approx(theory::walk_extinction(w)).epsilon(1e-12));

  RandomStream rng(31337, 0);
  for (int trial = 0; trial < 20; ++trial) {
    double l = 0.05 + 0.5 * rng.uniform01();
    double r = 0.05 + 0.5 * rng.uniform01();
    if (std::abs(l - r) < 0.02) l += 0.05;
    const double z = 1.0 - l - r >= 0.0 ? 1.0 - l - r : 0.0;
    const double scale = l + r + z;
    theory::WalkParams p{l / scale, r / scale, z / scale};
    CHECK(std::abs(theory::walk_return_pgf(p, 1.0) - theory::walk_extinction(p)) <
          1e-9);
  }
}

TEST_CASE("walk_simulate: matches the closed form and censors sanely") {
  auto est = theory::walk_simulate({0.2, 0.4, 0.4}, 2000, 20000, 2718);
  CHECK(est.ci.low <= 0.5);
  CHECK(0.5 <= est.ci.high);

  // No leftward steps: can never hit 0.
  auto zero = theory::walk_simulate({0.0, 0.6, 0.4}, 100, 2000, 5);
  CHECK(zero.point == 0.0);

  // Harsher censoring can only lower the estimate.
  auto short_run = theory::walk_simulate({0.35, 0.4, 0.25}, 10, 20000, 6);
  auto long_run = theory::walk_simulate({0.35, 0.4, 0.25}, 1000, 20000, 6);
  CHECK(short_run.point <= long_run.point);
}
