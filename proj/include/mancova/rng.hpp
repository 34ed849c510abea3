#ifndef MANCOVA_RNG_HPP
#define MANCOVA_RNG_HPP

#include <cstdint>
#include <random>

namespace mancova {

using RngEngine = std::mt19937_64;

// SplitMix64 step; maps (seed, stream) to a well-mixed engine seed so that
// independent streams can be derived by counter. Streams are reproducible
// for a fixed master seed regardless of how work is scheduled.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline RngEngine make_stream(std::uint64_t seed, std::uint64_t stream) {
  return RngEngine(mix_seed(seed, stream));
}

// +1 or -1 with equal probability, built on the engine's raw output so the
// draw sequence is fully determined by the standard.
inline double rademacher(RngEngine& rng) {
  return (rng() & 1ULL) ? 1.0 : -1.0;
}

}  // namespace mancova

#endif  // MANCOVA_RNG_HPP
