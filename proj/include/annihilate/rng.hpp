#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace annihilate {

// Philox4x32-10 block function (Salmon et al., SC 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Counter-based random stream. A stream is addressed by (master_seed,
// stream_id); distinct ids give statistically independent streams and the
// same id always replays the same bytes, so replicate-parallel runs are
// invariant to worker count and scheduling.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        hi_{static_cast<std::uint32_t>(stream_id),
            static_cast<std::uint32_t>(stream_id >> 32)} {}

  std::uint64_t next_u64() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1): rejects the (probability 2^-53) exact zero.
  double uniform01_open() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  // Unbiased uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Strictly positive exponential variate with the given rate.
  double exponential(double rate) {
    return -std::log1p(-uniform01_open()) / rate;
  }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> hi_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int have_ = 0;
};

}  // namespace annihilate
