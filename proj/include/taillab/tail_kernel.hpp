#pragma once

#include "taillab/estimate.hpp"
#include "taillab/functional.hpp"
#include "taillab/models.hpp"

#include <optional>

namespace taillab {

/// One draw of the tail process Y = R * Theta, R Pareto(alpha) independent of
/// Theta; |Y_0| = R > 1.
inline FiniteSeq sample_tail_process(const SpectralModel& model, Rng& rng) {
  FiniteSeq theta = model.sample_spectral(rng);
  return theta.scaled(pareto(rng, model.alpha()));
}

/// Radial mass of an indicator functional along a fixed angular path:
/// integral of 1{H(r x) = 1} alpha r^{-alpha-1} dr over (0, infinity),
/// which is critical_radius(x)^{-alpha}.
double radial_mass(const Functional& h, const FiniteSeq& x, double alpha);

/// P(no backward exceedance of Y = R Theta | Theta), the Pareto radius
/// integrated out: theta E[f(Q)] = E[q_weight(Theta) f(Theta / Theta*)] for
/// any f, since Q = Theta/Theta* on the acceptance event.
inline double q_weight(const FiniteSeq& theta, double alpha) {
  double b = window_max(theta, kNegInfIndex, -1);
  return b < 1.0 ? 1.0 - std::pow(b, alpha) : 0.0;
}

/// The angular part of the Q representative attached to a spectral draw.
inline FiniteSeq q_path(const FiniteSeq& theta) {
  return theta.divided_by(supnorm(theta));
}

/// Monte Carlo value of the polar decomposition's right-hand side,
/// integral_0^inf E[H(r Theta)] alpha r^{-alpha-1} dr.  Indicator kinds use
/// the closed per-path radial mass; other convergent kinds fall back to
/// two-sided Pareto importance sampling.  Homogeneous non-vanishing kinds are
/// rejected as divergent.
Estimate radial_integral(const Functional& h, const SpectralModel& model,
                         std::uint64_t n, unsigned lanes, std::uint64_t seed);

struct TimeChangeReport {
  Estimate lhs;   // E[H(B^k Y) 1{|Y_{-k}| > t}]
  Estimate rhs;   // t^{-alpha} E[H(tY) 1{|Y_k| > 1/t}]
  std::optional<Estimate> theta_lhs;  // E[H(B^k Theta) 1{Theta_{-k} != 0}]
  std::optional<Estimate> theta_rhs;  // E[H(Theta/|Theta_k|) |Theta_k|^alpha]
  double sigmas_y = 0.0;      // paired z-score of the tail-process form
  double sigmas_theta = 0.0;  // paired z-score of the spectral form
  double sigmas = 0.0;        // max of the two
  bool pass = false;
};

/// Checks the time change formula in its tail-process form and, for degree-0
/// functionals, in the spectral form as well; the two forms being equivalent
/// is what the paired report verifies numerically.
TimeChangeReport check_time_change(const SpectralModel& model, const Functional& h,
                                   Index k, double t, std::uint64_t n,
                                   unsigned lanes, std::uint64_t seed,
                                   double tol = 3.0);

/// Construction-time certificate for user-supplied laws: a small time-change
/// battery that throws on statistically significant violation.
void certify_time_change(const SpectralModel& model, std::uint64_t n,
                         unsigned lanes, std::uint64_t seed);

enum class NuMode { InfargmaxAnchored, QAnchored };

/// Evaluates the tail measure against an indicator functional.  Functionals
/// anchored at fixed coordinates are summed over all shifts of the sampled
/// path (the sum is exact for finitely supported paths); shift-invariant
/// functionals evaluate the per-class measure, whose total value the shift
/// sum would otherwise make infinite.
Estimate tail_measure_eval(const Functional& h, const SpectralModel& model,
                           NuMode mode, std::uint64_t n, unsigned lanes,
                           std::uint64_t seed);

}  // namespace taillab
