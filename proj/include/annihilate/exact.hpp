#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "annihilate/process.hpp"
#include "annihilate/rational.hpp"
#include "annihilate/stats.hpp"

namespace annihilate::exact {

struct EnumerationGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Law of the number of survivors among n bullets with continuous i.i.d.
// speeds. mass[k] vanishes unless k has the parity of n.
struct SurvivorDistribution {
  std::size_t n = 0;
  std::vector<Rational> mass;  // indexed by k = 0..n

  const Rational& at(std::size_t k) const { return mass.at(k); }
};

// q_n via the recurrence q_n(k) = (1/n) q_{n-1}(k-1) + (1 - 1/n) q_{n-2}(k),
// evaluated as an integer DP over the common denominator n!.
SurvivorDistribution qn(std::size_t n);

// All of q_0 .. q_{n_max} from one DP pass.
std::vector<SurvivorDistribution> qn_table(std::size_t n_max);

// P[no survivors among 2m bullets] = prod_{i=1}^m (1 - 1/(2i)).
Rational nazarov(std::size_t m);

// Exact P[bullet 1 alive at the horizon] by enumerating every speed
// assignment of bullets 2..n, weighting each by its mu-product and running
// the exact engine. Guarded: |S|^(n-1) must not exceed max_configurations.
Rational brute_force_first_survival(const SpeedLaw& law,
                                    const Rational& first_speed,
                                    std::size_t n, const Rational& horizon,
                                    std::uint64_t max_configurations = 10'000'000,
                                    int workers = 0);

struct EmpiricalSurvivors {
  std::vector<std::uint64_t> counts;  // survivor-count histogram, k = 0..n
  std::uint64_t reps = 0;

  double total_variation(const SurvivorDistribution& ref) const;
};

// Survivor-count histogram from continuous-uniform-speed simulations run to
// quiescence (finite configurations resolve in finitely many events).
EmpiricalSurvivors qn_empirical(std::size_t n, std::uint64_t reps,
                                std::uint64_t master_seed, int workers = 0);

// P[all 2m bullets annihilate], optionally conditioning bullet 1's speed.
BinomialEstimate em_s_estimate(std::size_t m, std::optional<double> first_speed,
                               std::uint64_t reps, std::uint64_t master_seed,
                               int workers = 0, double level = 0.95);

}  // namespace annihilate::exact
