#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace taillab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream for (seed, lane); lanes merge in index order
/// so results are reproducible for a fixed (seed, lane count).
inline std::mt19937_64 lane_rng(std::uint64_t seed, std::uint64_t lane) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(lane + 1)));
}

/// Collision-resistant seed for the idx-th estimator of a tagged group.
/// Additive schemes like seed + idx alias across nearby master seeds and
/// replay identical streams; hashing each component keeps them apart.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t idx = 0) {
  return splitmix64(splitmix64(base) ^
                    splitmix64(tag * 0x9E3779B97F4A7C15ULL + idx));
}

using Rng = std::mt19937_64;

/// Uniform on the open interval (0,1); never returns an exact endpoint.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// P(R > y) = y^{-alpha} for y >= 1.
inline double pareto(Rng& rng, double alpha) {
  return std::pow(uniform01(rng), -1.0 / alpha);
}

inline double exponential(Rng& rng) { return -std::log(uniform01(rng)); }

/// Uniform integer on [lo, hi] inclusive.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection-free modulo is fine here: span is tiny next to 2^64.
  return lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace taillab
