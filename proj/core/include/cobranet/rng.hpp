#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cobranet {

/// Seeded random source shared by every sampler in the library.
///
/// All draws go through the helpers below so that a (seed, call sequence)
/// pair fully determines the output. Bounded integers and unit reals are
/// computed here rather than with std distributions, whose algorithms are
/// implementation-defined.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    // Lemire's nearly-divisionless rejection method.
    auto product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        product = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  /// Exponential waiting time with the given total rate.
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> dist(mean);
    return dist(engine_);
  }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
};

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` under base seed `base`. Distinct (base, index)
/// pairs give unrelated engines.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix_seed(mix_seed(base) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

}  // namespace cobranet
