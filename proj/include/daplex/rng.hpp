#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "daplex/common.hpp"

// Small deterministic sampling helpers. std::uniform_real_distribution and
// friends are implementation-defined, so every draw here is spelled out to
// keep seeded runs byte-reproducible.

namespace daplex {

using Rng = std::mt19937_64;

/// splitmix64 step, used to derive independent per-case seeds.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform draw in [0, 1).
inline double uniform01(Rng& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [lo, hi] by rejection-free scaling (ranges are tiny).
inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

/// Standard normal via Box-Muller; two uniforms per call, no cached spare.
inline double normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

inline Vector normal_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

/// Fisher-Yates permutation of {0, ..., n-1}.
inline std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = uniform_int(rng, 0, i);
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace daplex
