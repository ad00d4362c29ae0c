#pragma once

#include "taillab/identities.hpp"
#include "taillab/models.hpp"
#include "taillab/tail_kernel.hpp"

#include <vector>

namespace taillab {

/// Blocking of a simulated series: k_n disjoint blocks of length r_n, scaled
/// by the level c_n.  The monitor r_n * P(|X_0| > c_n) must stay small for
/// the cluster asymptotics to be in range.
struct BlockingScheme {
  Index n = 0;
  Index r_n = 0;
  double c_n = 0.0;
  std::vector<double> u_grid = {1.0, 2.0};
  Index k_n = 0;
  double marginal_exceed_prob = 0.0;  // empirical P(|X_0| > c_n)
  double monitor = 0.0;               // r_n * marginal_exceed_prob
};

/// Defaults: r_n = floor(n^{0.35}) and c_n at the empirical 1 - n^{-0.6}
/// quantile of |X|, which keeps the monitor vanishing while leaving enough
/// exceedances for the per-run estimates.
BlockingScheme make_blocking_scheme(const TimeSeries& series,
                                    std::optional<Index> r_n = std::nullopt,
                                    std::optional<double> c_n = std::nullopt,
                                    std::vector<double> u_grid = {1.0, 2.0});

/// A shift-equivalence class representative of one block, anchored at its
/// infargmax; zero blocks stay zero.
struct ClusterBlock {
  FiniteSeq canonical;
  Index origin = 0;
};

std::vector<ClusterBlock> extract_blocks(const TimeSeries& series,
                                         const BlockingScheme& scheme,
                                         double scale);

/// Empirical cluster measure of H: block average of H(c_n^{-1} X_block)
/// normalized by r_n P(|X_0| > c_n); standard error by block bootstrap.
Estimate empirical_cluster_measure(const TimeSeries& series,
                                   const BlockingScheme& scheme,
                                   const Functional& h,
                                   std::uint64_t bootstrap_seed = 0xb007ULL,
                                   int bootstrap_rounds = 200);

struct NuStarResult {
  Estimate q_anchored;          // theta * radial integral over Q
  Estimate infargmax_anchored;  // radial integral over Theta given I(Theta)=0
  double sigmas = 0.0;
  bool pass = false;
};

/// The limiting cluster measure evaluated two ways; the ways agreeing is the
/// Q-law proposition realized numerically.
NuStarResult nu_star(const Functional& h, const SpectralModel& model,
                     std::uint64_t n, unsigned lanes, std::uint64_t seed,
                     double tol = 3.0);

/// Conditional law of the normalized block against the model's Q law: probe
/// means on (block*)^{-1} blocks given block* > c_n u, plus the Pareto radial
/// factorization of block*/(c_n u).
IdentityReport normalized_cluster_law(const TimeSeries& series,
                                      const BlockingScheme& scheme, double u,
                                      const std::vector<Functional>& probes,
                                      const SpectralModel& model,
                                      std::uint64_t n_model, unsigned lanes,
                                      std::uint64_t seed, double tol = 3.0);

struct AnticlusteringPoint {
  Index m = 0;
  Estimate est;
};

/// Decay curve of P(max_{m <= |i| <= r_n} |X_i| > c_n u | |X_0| > c_n u); a
/// diagnostic, not an identity.
std::vector<AnticlusteringPoint> anticlustering_diagnostic(
    const TimeSeries& series, const BlockingScheme& scheme,
    const std::vector<Index>& m_grid, double u);

}  // namespace taillab
