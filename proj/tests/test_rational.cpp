#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annihilate/rational.hpp"
#include "annihilate/stats.hpp"

using annihilate::Rational;

TEST_CASE("rational arithmetic is exact and canonical") {
  Rational a(3, 2), b(1, 3);
  CHECK((a + b).str() == "11/6");
  CHECK((a - b).str() == "7/6");
  CHECK((a * b).str() == "1/2");
  CHECK((a / b).str() == "9/2");
  CHECK(Rational(4, 8).str() == "1/2");
  CHECK(Rational(-4, 8).str() == "-1/2");
  CHECK(Rational(4, -8).str() == "-1/2");
  CHECK(Rational(6, 3).str() == "2");
  CHECK((Rational(1, 3) + Rational(1, 3) + Rational(1, 3)) == Rational(1));
}

TEST_CASE("rational parsing: fractions, integers, decimals") {
  CHECK(Rational::parse("3/2")->str() == "3/2");
  CHECK(Rational::parse("-3/2")->str() == "-3/2");
  CHECK(Rational::parse("12")->str() == "12");
  CHECK(Rational::parse("0.3325")->str() == "133/400");
  CHECK(Rational::parse("-0.5")->str() == "-1/2");
  CHECK(Rational::parse(".25")->str() == "1/4");
  CHECK(*Rational::parse("2/4") == Rational(1, 2));
  CHECK(!Rational::parse(""));
  CHECK(!Rational::parse("a/b"));
  CHECK(!Rational::parse("1/0"));
  CHECK(!Rational::parse("1.2.3"));
  CHECK(!Rational::parse("1e5"));
}

TEST_CASE("floor and comparisons") {
  CHECK(Rational(7, 2).floor_int64() == 3);
  CHECK(Rational(-7, 2).floor_int64() == -4);
  CHECK(Rational(6, 2).floor_int64() == 3);
  CHECK(Rational(7, 2) > Rational(10, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(3, 2).is_integer() == false);
  CHECK(Rational(4, 2).is_integer() == true);
}

TEST_CASE("pow and division guards") {
  CHECK(annihilate::pow(Rational(1, 3), 5) == Rational(1, 243));
  CHECK(annihilate::pow(Rational(2), 0) == Rational(1));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::invalid_argument);
}

TEST_CASE("wilson interval: hand-checked values and edge behavior") {
  using annihilate::wilson_estimate;
  // k=5, n=10 at z=2 (level ~0.9545): center 0.5, spread 2*sqrt(0.035)/1.4.
  const double level_z2 = 0.954499736103642;
  auto e = wilson_estimate(5, 10, level_z2);
  CHECK(e.point == doctest::Approx(0.5));
  CHECK(e.ci.low == doctest::Approx(0.5 - 2 * std::sqrt(0.035) / 1.4).epsilon(1e-6));
  CHECK(e.ci.high == doctest::Approx(0.5 + 2 * std::sqrt(0.035) / 1.4).epsilon(1e-6));

  auto zero = wilson_estimate(0, 100);
  CHECK(zero.ci.low == 0.0);
  CHECK(zero.ci.high > 0.0);
  auto full = wilson_estimate(100, 100);
  CHECK(full.ci.high == 1.0);
  CHECK(full.ci.low < 1.0);
  // Interval excludes 0 as soon as there is one success.
  CHECK(wilson_estimate(1, 100000).ci.low > 0.0);

  CHECK_THROWS_AS(wilson_estimate(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_estimate(3, 2), std::invalid_argument);
  CHECK(annihilate::normal_two_sided_z(0.95) == doctest::Approx(1.959964).epsilon(1e-5));
}
