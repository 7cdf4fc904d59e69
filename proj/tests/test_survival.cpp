#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annihilate/survival.hpp"

using annihilate::Rational;
using annihilate::RandomStream;
using annihilate::SpacingModel;
using annihilate::SpeedLaw;
namespace engine = annihilate::engine;

namespace {

SpeedLaw uniform123() {
  return SpeedLaw::atomic({{Rational(1), Rational(1, 3)},
                           {Rational(2), Rational(1, 3)},
                           {Rational(3), Rational(1, 3)}});
}

SpeedLaw uniform_halves() {
  return SpeedLaw::atomic({{Rational(1), Rational(1, 3)},
                           {Rational(3, 2), Rational(1, 3)},
                           {Rational(3), Rational(1, 3)}});
}

}  // namespace

TEST_CASE("sample_bullets: unit firing grid and forced first speed") {
  RandomStream stream(11, 0);
  auto bullets = annihilate::sample_bullets<Rational>(
      uniform123(), SpacingModel::unit(), 4, Rational(2), stream);
  REQUIRE(bullets.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(bullets[i].index == static_cast<std::int64_t>(i) + 1);
    CHECK(bullets[i].fire_time == Rational(static_cast<long long>(i) + 1));
  }
  CHECK(bullets[0].speed == Rational(2));
}

TEST_CASE("sample_bullets: continuous speeds are deterministic under a seed") {
  RandomStream s1(3, 9), s2(3, 9);
  auto a = annihilate::sample_bullets<double>(
      SpeedLaw::uniform01(), SpacingModel::unit(), 3, std::nullopt, s1);
  auto c = annihilate::sample_bullets<double>(
      SpeedLaw::uniform01(), SpacingModel::unit(), 3, std::nullopt, s2);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].speed == c[i].speed);
    CHECK(a[i].speed > 0.0);
    CHECK(a[i].speed < 1.0);
  }
}

TEST_CASE("sample_bullets: exponential gaps reproduce the stream's draws") {
  // Contract: per bullet, the gap is drawn first, then one speed draw.
  RandomStream stream(17, 4), replay(17, 4);
  auto bullets = annihilate::sample_bullets<double>(
      uniform123(), SpacingModel::exponential(1.0), 2, std::nullopt, stream);
  const double z1 = replay.exponential(1.0);
  replay.below(3);
  const double z2 = replay.exponential(1.0);
  CHECK(bullets[0].fire_time == z1);
  CHECK(bullets[1].fire_time == z1 + z2);
}

TEST_CASE("sample_bullets: forced speed must be in an atomic law's support") {
  RandomStream stream(1, 1);
  CHECK_THROWS_AS(
      annihilate::sample_bullets<Rational>(uniform123(), SpacingModel::unit(),
                                           3, Rational(7), stream),
      std::invalid_argument);
}

TEST_CASE("speed law validation") {
  CHECK_THROWS_AS(SpeedLaw::atomic({{Rational(1), Rational(1, 2)},
                                    {Rational(2), Rational(2, 5)}}),
                  std::invalid_argument);  // sums to 9/10
  CHECK_THROWS_AS(SpeedLaw::atomic({{Rational(1), Rational(1, 2)},
                                    {Rational(1), Rational(1, 2)}}),
                  std::invalid_argument);  // duplicate speed
  // Zero-mass atoms are allowed (epsilon may be zero).
  auto law = SpeedLaw::atomic(
      {{Rational(1), Rational(0)}, {Rational(2), Rational(1)}});
  CHECK(law.atoms()[1].prob.is_zero());
  RandomStream stream(1, 2);
  for (int i = 0; i < 50; ++i)
    CHECK(law.atoms()[law.sample_atom(stream)].speed == Rational(2));
}

TEST_CASE("first_bullet_fate: the fastest first bullet is never caught") {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    RandomStream stream(21, rep);
    auto fate = engine::first_bullet_fate<Rational>(
        uniform123(), SpacingModel::unit(), Rational(3), Rational(50), stream);
    CHECK(fate.alive());
  }
}

TEST_CASE("first_bullet_fate: a trailing maximal bullet catches immediately") {
  // Law concentrated on the top speed, first bullet forced to the second
  // fastest: the catcher is always bullet 2.
  auto law = SpeedLaw::atomic(
      {{Rational(2), Rational(1)}, {Rational(1), Rational(0)}});
  RandomStream stream(4, 0);
  auto fate = engine::first_bullet_fate<Rational>(
      law, SpacingModel::unit(), Rational(1), Rational(100), stream);
  REQUIRE(fate.caught);
  CHECK(fate.caught->catcher_index == 2);
  CHECK(fate.caught->time == Rational(3));
  CHECK(fate.caught->position == Rational(2));
}

TEST_CASE("first_bullet_fate: caught verdicts are final under longer horizons") {
  const auto law = uniform_halves();
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    RandomStream s1(31, rep), s2(31, rep);
    auto early = engine::first_bullet_fate<Rational>(
        law, SpacingModel::unit(), Rational(3, 2), Rational(12), s1);
    auto late = engine::first_bullet_fate<Rational>(
        law, SpacingModel::unit(), Rational(3, 2), Rational(40), s2);
    if (early.caught) {
      REQUIRE(late.caught);
      CHECK(late.caught->catcher_index == early.caught->catcher_index);
      CHECK(late.caught->time == early.caught->time);
    }
  }
}

TEST_CASE("first_bullet_fate: exponential spacings run in float mode") {
  std::uint64_t caught = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    RandomStream stream(77, rep);
    auto fate = engine::first_bullet_fate<double>(
        uniform123(), SpacingModel::exponential(1.0), 1.0, 30.0, stream);
    if (fate.caught) {
      ++caught;
      CHECK(fate.caught->catcher_index > 1);
    }
  }
  CHECK(caught > 50);  // the slowest bullet rarely survives 30 time units
}

TEST_CASE("survival_curve: forced max speed gives estimate 1 everywhere") {
  auto curve = engine::survival_curve(uniform123(), SpacingModel::unit(),
                                      Rational(3), {Rational(10), Rational(50)},
                                      500, 13);
  for (const auto& pt : curve) {
    CHECK(pt.estimate.point == 1.0);
    CHECK(pt.estimate.ci.high == 1.0);
  }
}

TEST_CASE("survival_curve: nonincreasing by construction, plateau for s2") {
  auto curve = engine::survival_curve(
      uniform123(), SpacingModel::unit(), Rational(2),
      {Rational(10), Rational(100), Rational(400)}, 2000, 14);
  CHECK(curve[0].estimate.point >= curve[1].estimate.point);
  CHECK(curve[1].estimate.point >= curve[2].estimate.point);
  CHECK(curve[2].estimate.ci.low > 0.0);

  auto slow = engine::survival_curve(
      uniform123(), SpacingModel::unit(), Rational(1),
      {Rational(10), Rational(100), Rational(400)}, 2000, 14);
  CHECK(slow[0].estimate.point >= slow[1].estimate.point);
  CHECK(slow[2].estimate.point < curve[2].estimate.point);
}

TEST_CASE("survival_curve: worker count never changes the counts") {
  const std::vector<Rational> horizons = {Rational(20), Rational(60)};
  auto one = engine::survival_curve(uniform123(), SpacingModel::unit(),
                                    Rational(2), horizons, 600, 5, 1);
  auto eight = engine::survival_curve(uniform123(), SpacingModel::unit(),
                                      Rational(2), horizons, 600, 5, 8);
  for (std::size_t k = 0; k < horizons.size(); ++k)
    CHECK(one[k].estimate.successes == eight[k].estimate.successes);
}

TEST_CASE("survival_curve: continuous law censors correctly") {
  auto curve = engine::survival_curve(SpeedLaw::uniform01(),
                                      SpacingModel::unit(), std::nullopt,
                                      {Rational(5), Rational(30)}, 1500, 23);
  CHECK(curve[0].estimate.point >= curve[1].estimate.point);
  CHECK(curve[0].estimate.point > 0.0);
}

TEST_CASE("two_sided_fates: extreme center speeds settle one side") {
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    RandomStream stream(41, rep);
    auto fast = engine::two_sided_fates<Rational>(
        uniform123(), SpacingModel::unit(), 30, Rational(3), stream);
    CHECK(fast.survives_plus);  // nothing behind can catch the fastest
    RandomStream stream2(42, rep);
    auto slow = engine::two_sided_fates<Rational>(
        uniform123(), SpacingModel::unit(), 30, Rational(1), stream2);
    CHECK(slow.survives_minus);  // uncatchable by bullets fired before it
    CHECK(slow.survives_both == (slow.survives_plus && slow.survives_minus));
  }
}

TEST_CASE("two_sided_estimate: product identity holds within noise") {
  auto est = engine::two_sided_estimate(uniform123(), SpacingModel::unit(), 200,
                                        Rational(2), 4000, 51);
  const double prod = est.plus.point * est.minus.point;
  const double hw = est.both.ci.half_width() +
                    est.minus.point * est.plus.ci.half_width() +
                    est.plus.point * est.minus.ci.half_width();
  CHECK(std::abs(est.both.point - prod) < 3 * hw + 1e-12);
}

TEST_CASE("monotone_coupling_check: zero violations") {
  CHECK(engine::monotone_coupling_check(uniform123(), SpacingModel::unit(),
                                        Rational(1), Rational(3), Rational(100),
                                        2000, 61) == 0);
  CHECK(engine::monotone_coupling_check(uniform123(), SpacingModel::unit(),
                                        Rational(1), Rational(2), Rational(100),
                                        2000, 62) == 0);
  // s_lo = s_hi: identical processes.
  CHECK(engine::monotone_coupling_check(uniform123(), SpacingModel::unit(),
                                        Rational(2), Rational(2), Rational(50),
                                        500, 63) == 0);
  // Exponential spacing runs the float path.
  CHECK(engine::monotone_coupling_check(uniform123(),
                                        SpacingModel::exponential(1.0),
                                        Rational(1), Rational(3), Rational(50),
                                        500, 64) == 0);
}
