#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace raq {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream). Every Monte-Carlo batch and
/// harness task draws from its own stream so results do not depend on how
/// work is scheduled.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x5157u};
  return Rng(seq);
}

/// Mixes (seed, index) into a new seed (splitmix64 finalizer), for tasks that
/// need a whole family of streams of their own.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Draw from CN(0, variance): real and imaginary parts are each N(0, variance/2).
inline std::complex<double> complex_normal(Rng& rng, double variance) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double s = std::sqrt(0.5 * variance);
  const double re = unit(rng);
  const double im = unit(rng);
  return {s * re, s * im};
}

}  // namespace raq
