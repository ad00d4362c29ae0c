#pragma once

#include "taillab/estimate.hpp"
#include "taillab/functional.hpp"
#include "taillab/models.hpp"

#include <functional>
#include <optional>

namespace taillab {

/// Configuration of the M3 simulator: window, support truncation of the Q
/// draws, shift margin covering contributions from outside the window, and
/// the candidate extremal index driving the shift intensity.
struct M3Config {
  SpectralModel model;
  Index lo;
  Index hi;
  double trunc_eps;
  Index shift_margin;
  double theta;
};

/// Builds a config, deriving the margin from the model's decay (geometric
/// rate or enumerated support) and the shift intensity from the exact
/// candidate extremal index where available, a Monte Carlo estimate
/// otherwise.
M3Config make_m3_config(const SpectralModel& model, Index lo, Index hi,
                        double trunc_eps = 1e-6,
                        std::optional<Index> shift_margin = std::nullopt,
                        std::uint64_t theta_seed = 0x4d335eedULL);

struct MaxStablePath {
  FiniteSeq path;  // strictly positive over the configured window
  std::uint64_t seed = 0;
};

/// One path of zeta_j = max_i P_i Q^{(i)}_{j - T_i} over the window.  The
/// Poisson radii arrive in decreasing order, so generation stops exactly when
/// the next radius cannot beat the current minimum (Q* = 1 bounds every
/// contribution by its radius).
MaxStablePath simulate_m3(const M3Config& cfg, Rng& rng);

/// -log P(zeta_j <= y_j for all j) by the infargmax formula, with the
/// alpha-power weights that make the one-coordinate case the alpha-Frechet
/// marginal.  Levels are the stored values of `levels`; +infinity entries and
/// everything outside the window impose no constraint.  All-infinite levels
/// give exactly 0.
Estimate fdd_log_survival(const FiniteSeq& levels, const SpectralModel& model,
                          std::uint64_t n, unsigned lanes, std::uint64_t seed);

struct ZSpectralEstimate {
  Estimate est;
  double effective_sample_size = 0.0;
  bool weight_warning = false;  // effective sample size below n/100
};

/// E[F(Theta)] recovered from a Z-representation path law via
/// E[Z_{-h}^alpha F(B^h Z / Z_{-h}) 1{Z_{-h} != 0}]; `h` independence of the
/// result is the stationarity consistency check.
ZSpectralEstimate spectral_from_Z(const std::function<FiniteSeq(Rng&)>& z_sampler,
                                  double alpha, Index h, const Functional& f,
                                  std::uint64_t n, unsigned lanes,
                                  std::uint64_t seed);

/// Z law made of a fixed nonnegative profile placed at a uniform location in
/// [-location_range, location_range] and scaled so that E[Z_j^alpha] = 1 on
/// every coordinate the range covers.  The max-stable process it represents
/// has the moving-average spectral tail process of `profile`.
std::function<FiniteSeq(Rng&)> scaled_profile_z_sampler(const FiniteSeq& profile,
                                                        double alpha,
                                                        Index location_range);

}  // namespace taillab
