#include "annihilate/engine.hpp"

namespace annihilate::engine {

std::optional<ScaledLaw> ScaledLaw::make(const SpeedLaw& law) {
  if (!law.is_atomic()) return std::nullopt;
  try {
    ScaledLaw s;
    for (const auto& atom : law.atoms()) {
      auto d = atom.speed.den_int64();
      if (!d) return std::nullopt;
      s.L = lcm_checked(s.L, *d);
    }
    for (const auto& atom : law.atoms()) {
      auto num = atom.speed.num_int64();
      auto den = atom.speed.den_int64();
      if (!num || !den) return std::nullopt;
      const __int128 scaled = static_cast<__int128>(*num) * (s.L / *den);
      if (scaled >= (static_cast<__int128>(1) << 31)) return std::nullopt;
      s.a.push_back(static_cast<std::int64_t>(scaled));
    }
    for (std::size_t i = 0; i < s.a.size(); ++i)
      for (std::size_t j = i + 1; j < s.a.size(); ++j)
        s.D = lcm_checked(s.D, s.a[i] - s.a[j]);  // atoms descending, diff > 0
    if (s.D >= (static_cast<std::int64_t>(1) << 31)) return std::nullopt;
    return s;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

}  // namespace annihilate::engine
