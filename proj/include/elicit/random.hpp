#pragma once

#include <cstdint>
#include <random>

namespace elicit {

// Mixes a base seed with a stream index (splitmix64 finalizer). Used to give
// every tree, arm and pipeline stage its own independent generator.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Thin wrapper over mt19937_64 with portable draws. The standard
// distributions are implementation-defined, so bounded integers and unit
// reals are derived here to keep outputs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform real in [0, 1] with 53 bits of resolution; both ends reachable.
  double uniform_closed() {
    return static_cast<double>(engine_() >> 11) / static_cast<double>((1ULL << 53) - 1);
  }

  // Uniform real in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace elicit
