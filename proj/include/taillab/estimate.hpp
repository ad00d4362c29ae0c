#pragma once

#include "taillab/random.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace taillab {

/// A Monte Carlo scalar: point value, standard error, sample count, seed.
struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  static Estimate exact(double v) { return {v, 0.0, 1, 0}; }
};

/// Combined-stderr z-score for estimates from independent streams.  The
/// stderr is floored at 1e-9 of the sides' scale: zero-variance estimators
/// still carry double-precision accumulation noise and the samplers' 1e-12
/// path truncation, both far below any real identity violation.
inline double discrepancy_sigmas(const Estimate& a, const Estimate& b) {
  double diff = std::abs(a.value - b.value);
  double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
  double se = std::max(std::hypot(a.stderr_, b.stderr_), 1e-9 * scale);
  return diff / se;
}

/// z-score for sides sharing their draws.  Two valid normalizations exist:
/// the accumulated per-draw difference (exact for any cross-correlation when
/// the difference has finite variance) and the combined per-side stderr
/// (self-stabilizing for heavy-tailed sides, where the same extreme draw
/// inflates both sides' stderrs).  A true identity is insignificant under at
/// least one of them, and a real violation grows without bound under both,
/// so the verdict takes the smaller score.
inline double paired_sigmas(const Estimate& a, const Estimate& b,
                            const Estimate& diff) {
  double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
  double se = std::max(diff.stderr_, 1e-9 * scale);
  return std::min(std::abs(diff.value) / se, discrepancy_sigmas(a, b));
}

inline bool agrees(const Estimate& a, const Estimate& b, double tol = 3.0) {
  return discrepancy_sigmas(a, b) <= tol;
}

class Welford {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const Welford& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
    double d = o.mean_ - mean_;
    std::uint64_t n = n_ + o.n_;
    mean_ += d * nb / static_cast<double>(n);
    m2_ += o.m2_ + d * d * na * nb / static_cast<double>(n);
    n_ = n;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }

  double stderr_of_mean() const {
    if (n_ < 2) return 0.0;
    double var = m2_ / static_cast<double>(n_ - 1);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(n_));
  }

  Estimate estimate(std::uint64_t seed) const {
    return {mean_, stderr_of_mean(), n_, seed};
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Fans `n` draws across `lanes` independent RNG streams.  `fill` writes one
/// value per tracked statistic into `out` for each draw.  Per-lane accumulators
/// merge in lane order, so results are bit-reproducible for fixed
/// (seed, lane count) regardless of thread scheduling.
std::vector<Estimate> mc_run(std::uint64_t n, unsigned lanes, std::uint64_t seed,
                             std::size_t n_stats,
                             const std::function<void(Rng&, std::span<double>)>& fill);

inline Estimate mc_mean(std::uint64_t n, unsigned lanes, std::uint64_t seed,
                        const std::function<double(Rng&)>& draw) {
  auto r = mc_run(n, lanes, seed, 1,
                  [&](Rng& rng, std::span<double> out) { out[0] = draw(rng); });
  return r[0];
}

unsigned default_lanes();

}  // namespace taillab
