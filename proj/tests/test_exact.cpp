#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annihilate/exact.hpp"
#include "annihilate/survival.hpp"

using annihilate::Rational;
using annihilate::SpacingModel;
using annihilate::SpeedLaw;
namespace exact = annihilate::exact;

namespace {

SpeedLaw uniform12() {
  return SpeedLaw::atomic(
      {{Rational(1), Rational(1, 2)}, {Rational(2), Rational(1, 2)}});
}

}  // namespace

TEST_CASE("qn: base cases and small rows from the recurrence") {
  auto q1 = exact::qn(1);
  CHECK(q1.mass[1] == Rational(1));
  CHECK(q1.mass[0].is_zero());

  auto q2 = exact::qn(2);
  CHECK(q2.mass[0] == Rational(1, 2));
  CHECK(q2.mass[2] == Rational(1, 2));

  auto q3 = exact::qn(3);
  CHECK(q3.mass[1] == Rational(5, 6));
  CHECK(q3.mass[3] == Rational(1, 6));
  CHECK(q3.mass[0].is_zero());
  CHECK(q3.mass[2].is_zero());
}

TEST_CASE("qn: masses sum to 1 exactly and vanish off-parity, n <= 500") {
  auto table = exact::qn_table(500);
  for (std::size_t n = 0; n <= 500; n += (n < 40 ? 1 : 23)) {
    Rational total(0);
    for (std::size_t k = 0; k <= n; ++k) {
      if ((k % 2) != (n % 2)) CHECK(table[n].mass[k].is_zero());
      total += table[n].mass[k];
    }
    CHECK(total == Rational(1));
  }
}

TEST_CASE("nazarov: first values and the q_{2m}(0) identity up to 200") {
  CHECK(exact::nazarov(1) == Rational(1, 2));
  CHECK(exact::nazarov(2) == Rational(3, 8));
  CHECK(exact::nazarov(3) == Rational(5, 16));

  auto table = exact::qn_table(400);
  Rational prod(1);
  for (std::size_t m = 1; m <= 200; ++m) {
    prod *= Rational(2 * static_cast<long long>(m) - 1,
                     2 * static_cast<long long>(m));
    CHECK(table[2 * m].mass[0] == prod);
  }
}

TEST_CASE("brute force: hand-enumerated two-speed cases") {
  CHECK(exact::brute_force_first_survival(uniform12(), Rational(1), 2,
                                          Rational(100)) == Rational(1, 2));
  // n = 3: the (1,2) assignment shields bullet 1, so survival stays 1/2.
  CHECK(exact::brute_force_first_survival(uniform12(), Rational(1), 3,
                                          Rational(100)) == Rational(1, 2));
  CHECK(exact::brute_force_first_survival(uniform12(), Rational(2), 4,
                                          Rational(100)) == Rational(1));
  // Single bullet: alive with probability 1.
  CHECK(exact::brute_force_first_survival(uniform12(), Rational(1), 1,
                                          Rational(10)) == Rational(1));
}

TEST_CASE("brute force: enumeration guard trips") {
  CHECK_THROWS_AS(
      exact::brute_force_first_survival(uniform12(), Rational(1), 40,
                                        Rational(10), 1000),
      exact::EnumerationGuard);
}

TEST_CASE("brute force matches the Monte Carlo estimate inside its interval") {
  auto law = SpeedLaw::atomic({{Rational(1), Rational(1, 3)},
                               {Rational(2), Rational(1, 3)},
                               {Rational(3), Rational(1, 3)}});
  for (std::size_t n : {4, 6}) {
    for (const auto& first : {Rational(1), Rational(2)}) {
      const Rational horizon(50);
      const auto truth =
          exact::brute_force_first_survival(law, first, n, horizon);
      // Censor the Monte Carlo run at the same bullet count: n bullets fired
      // by time n, later ones cannot reach the horizon-n state.
      auto curve = annihilate::engine::survival_curve(
          law, SpacingModel::unit(), first, {Rational(static_cast<long long>(n))},
          20000, 97);
      // The enumeration at horizon 50 resolves every catch among n bullets;
      // compare at the same censoring time instead.
      const auto truth_at_n = exact::brute_force_first_survival(
          law, first, n, Rational(static_cast<long long>(n)));
      CHECK(curve[0].estimate.ci.low <= truth_at_n.to_double());
      CHECK(truth_at_n.to_double() <= curve[0].estimate.ci.high);
      CHECK(truth <= truth_at_n);
    }
  }
}

TEST_CASE("qn_empirical: degenerate and two-bullet sanity") {
  auto one = exact::qn_empirical(1, 500, 3);
  CHECK(one.counts[1] == 500);

  auto two = exact::qn_empirical(2, 20000, 4);
  const double p0 = static_cast<double>(two.counts[0]) / 20000.0;
  CHECK(p0 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(two.counts[1] == 0);
  CHECK(two.total_variation(exact::qn(2)) < 0.02);
}

TEST_CASE("qn_empirical: total variation against the recurrence at n = 8") {
  auto emp = exact::qn_empirical(8, 20000, 5);
  CHECK(emp.total_variation(exact::qn(8)) < 0.02);
}

TEST_CASE("em_s_estimate: closed forms at m = 1 and the s = 1 edge") {
  // One trailing bullet: annihilation iff its speed exceeds s.
  for (double s : {0.25, 0.5, 0.8}) {
    auto est = exact::em_s_estimate(1, s, 30000, 6);
    CHECK(est.point == doctest::Approx(1.0 - s).epsilon(0.05));
  }
  auto top = exact::em_s_estimate(1, 1.0, 2000, 7);
  CHECK(top.point == 0.0);

  // Unconditioned variant approaches the exact product at m = 3.
  auto un = exact::em_s_estimate(3, std::nullopt, 30000, 8);
  CHECK(un.point ==
        doctest::Approx(exact::nazarov(3).to_double()).epsilon(0.08));
}

TEST_CASE("em_s_estimate is nonincreasing in s under paired seeds") {
  const std::uint64_t seed = 9;
  double prev = 2.0;
  for (double s : {0.2, 0.5, 0.9}) {
    auto est = exact::em_s_estimate(2, s, 20000, seed);
    CHECK(est.point <= prev + 0.02);
    prev = est.point;
  }
}
