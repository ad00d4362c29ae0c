#include "taillab/tail_kernel.hpp"

#include <cmath>
#include <sstream>

namespace taillab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked(double v, const Functional& h) {
  if (std::isnan(v)) {
    throw std::invalid_argument("functional " + h.name() + " produced NaN");
  }
  return v;
}

/// Sum over all shifts j of the radial mass of H along B^j x.  Exact over the
/// coordinate window when H declares one; otherwise expands outward from 0
/// under a tail-mass monitor and rejects sums that fail to die out.
double shift_sum_radial_mass(const Functional& h, const FiniteSeq& x, double alpha) {
  FiniteSeq t = x.trimmed();
  if (t.empty()) return 0.0;
  if (auto w = h.coord_window()) {
    double total = 0.0;
    // Coordinates of B^j t live on [start+j, end-1+j]; overlap with the
    // functional's window bounds the nonzero terms.
    Index jlo = w->first - (t.end() - 1);
    Index jhi = w->second - t.start();
    for (Index j = jlo; j <= jhi; ++j) {
      double c = h.critical_radius(shift(t, j));
      if (c < kInf) total += std::pow(c, -alpha);
    }
    return total;
  }
  Index quiet_limit = t.size() + 16;
  double total = 0.0;
  for (int dir : {+1, -1}) {
    Index quiet = 0;
    for (Index step = (dir > 0 ? 0 : 1);; ++step) {
      if (step > 200000) {
        std::ostringstream os;
        os << "tail-mass monitor: shift sum for " << h.name()
           << " did not converge (running total " << total << ")";
        throw std::runtime_error(os.str());
      }
      double c = h.critical_radius(shift(t, dir * step));
      double mass = c < kInf ? std::pow(c, -alpha) : 0.0;
      total += mass;
      quiet = mass == 0.0 ? quiet + 1 : 0;
      if (quiet > quiet_limit) break;
    }
  }
  return total;
}

}  // namespace

double radial_mass(const Functional& h, const FiniteSeq& x, double alpha) {
  if (!h.is_indicator()) {
    throw std::invalid_argument("radial_mass needs an indicator functional, got " +
                                h.name());
  }
  double c = h.critical_radius(x);
  return c < kInf ? std::pow(c, -alpha) : 0.0;
}

Estimate radial_integral(const Functional& h, const SpectralModel& model,
                         std::uint64_t n, unsigned lanes, std::uint64_t seed) {
  double alpha = model.alpha();
  if (h.is_indicator()) {
    return mc_mean(n, lanes, seed, [&](Rng& rng) {
      return radial_mass(h, model.sample_spectral(rng), alpha);
    });
  }
  if (h.degree().has_value()) {
    throw std::invalid_argument(
        "radial integral of the homogeneous functional " + h.name() +
        " diverges; only indicator or compactly scaled kinds are admissible");
  }
  // Two-sided Pareto importance sampling:
  //   int_1^inf ... dr = E_R[H(R theta)]
  //   int_0^1  ... dr = E_S[S^{2 alpha} H(theta / S)]
  return mc_mean(n, lanes, seed, [&](Rng& rng) {
    FiniteSeq theta = model.sample_spectral(rng);
    double r = pareto(rng, alpha);
    double s = pareto(rng, alpha);
    double up = checked(h(theta.scaled(r)), h);
    double down = checked(h(theta.divided_by(s)), h);
    return up + std::pow(s, 2.0 * alpha) * down;
  });
}

TimeChangeReport check_time_change(const SpectralModel& model, const Functional& h,
                                   Index k, double t, std::uint64_t n,
                                   unsigned lanes, std::uint64_t seed, double tol) {
  if (t <= 0.0) throw std::invalid_argument("t must be positive");
  double alpha = model.alpha();
  bool degree_zero = h.degree() && *h.degree() == 0.0;
  std::size_t n_stats = degree_zero ? 6 : 3;

  auto stats = mc_run(n, lanes, seed, n_stats, [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    double r = pareto(rng, alpha);
    FiniteSeq y = theta.scaled(r);
    out[0] = std::abs(y[-k]) > t ? checked(h(shift(y, k)), h) : 0.0;
    out[1] = std::abs(y[k]) > 1.0 / t
                 ? std::pow(t, -alpha) * checked(h(y.scaled(t)), h)
                 : 0.0;
    out[2] = out[0] - out[1];
    if (degree_zero) {
      double bk = std::abs(theta[-k]);
      out[3] = bk != 0.0 ? checked(h(shift(theta, k)), h) : 0.0;
      double fk = std::abs(theta[k]);
      out[4] = fk != 0.0
                   ? std::pow(fk, alpha) * checked(h(theta.divided_by(fk)), h)
                   : 0.0;
      out[5] = out[3] - out[4];
    }
  });

  TimeChangeReport rep;
  rep.lhs = stats[0];
  rep.rhs = stats[1];
  rep.sigmas_y = paired_sigmas(rep.lhs, rep.rhs, stats[2]);
  rep.sigmas = rep.sigmas_y;
  rep.pass = rep.sigmas_y <= tol;
  if (degree_zero) {
    rep.theta_lhs = stats[3];
    rep.theta_rhs = stats[4];
    rep.sigmas_theta = paired_sigmas(*rep.theta_lhs, *rep.theta_rhs, stats[5]);
    rep.sigmas = std::max(rep.sigmas_y, rep.sigmas_theta);
    rep.pass = rep.pass && rep.sigmas_theta <= tol;
  }
  return rep;
}

void certify_time_change(const SpectralModel& model, std::uint64_t n,
                         unsigned lanes, std::uint64_t seed) {
  const Functional battery[] = {Functional::one(), Functional::count_exceed(1.0)};
  int cell = 0;
  for (const auto& h : battery) {
    for (Index k : {-2, -1, 1, 2}) {
      for (double t : {0.5, 1.0, 2.0}) {
        auto rep = check_time_change(model, h, k, t, n, lanes,
                                     derive_seed(seed, 20, cell++), 4.5);
        if (!rep.pass) {
          std::ostringstream os;
          os << model.name() << " violates the time change formula at H="
             << h.name() << ", k=" << k << ", t=" << t << " (" << rep.sigmas
             << " sigma)";
          throw std::runtime_error(os.str());
        }
      }
    }
  }
}

Estimate tail_measure_eval(const Functional& h, const SpectralModel& model,
                           NuMode mode, std::uint64_t n, unsigned lanes,
                           std::uint64_t seed) {
  if (!h.is_indicator()) {
    throw std::invalid_argument(
        "tail_measure_eval needs a threshold-kind functional, got " + h.name());
  }
  double alpha = model.alpha();
  bool per_class = h.shift_invariant();

  if (mode == NuMode::InfargmaxAnchored) {
    return mc_mean(n, lanes, seed, [&](Rng& rng) {
      FiniteSeq theta = model.sample_spectral(rng);
      if (!(infargmax(theta) == ArgmaxResult::finite(0))) return 0.0;
      return per_class ? radial_mass(h, theta, alpha)
                       : shift_sum_radial_mass(h, theta, alpha);
    });
  }
  // Q-anchored: theta E[f(Q)] = E[q_weight(Theta) f(Theta/Theta*)].
  return mc_mean(n, lanes, seed, [&](Rng& rng) {
    FiniteSeq theta = model.sample_spectral(rng);
    double w = q_weight(theta, alpha);
    if (w == 0.0) return 0.0;
    FiniteSeq q = q_path(theta);
    return w * (per_class ? radial_mass(h, q, alpha)
                          : shift_sum_radial_mass(h, q, alpha));
  });
}

}  // namespace taillab
