#ifndef ZLAB_RNG_HPP
#define ZLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace zlab {

// splitmix64 finalizer; derives independent per-sample streams from (seed, index)
// so sweeps give the same samples for any thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix_seed(seed, index));
}

// Uniform in [0, 1), 53 random bits.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace zlab

#endif
