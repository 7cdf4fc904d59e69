#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "annihilate/rng.hpp"

using annihilate::philox4x32;
using annihilate::RandomStream;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (kat_vectors).
  auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                            0xbc57ac4cu, 0x9b00dbd8u});
  out = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu});
  CHECK(out == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu,
                                            0xa20bc7c6u, 0x6d5451fdu});
  out = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u});
  CHECK(out == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                            0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams replay and are distinct across ids") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same_c = true, same_d = true;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) same_c = false;
    if (va != d.next_u64()) same_d = false;
  }
  CHECK_FALSE(same_c);
  CHECK_FALSE(same_d);
}

TEST_CASE("uniform01 lies in [0,1); open variant excludes 0") {
  RandomStream s(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) CHECK(s.uniform01_open() > 0.0);
}

TEST_CASE("below(n) is within range and roughly uniform") {
  RandomStream s(2, 0);
  std::array<int, 3> hist{};
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const auto v = s.below(3);
    REQUIRE(v < 3);
    ++hist[v];
  }
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(hist[k] - n / 3) < 5 * std::sqrt(n / 3.0));
  CHECK(s.below(1) == 0);
}

TEST_CASE("exponential gaps are strictly positive with the right mean") {
  RandomStream s(3, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = s.exponential(2.0);
    REQUIRE(g > 0.0);
    sum += g;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.05));
}
