#include "taillab/max_stable.hpp"

#include "taillab/identities.hpp"
#include "taillab/tail_kernel.hpp"

#include <cmath>
#include <limits>

namespace taillab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteSeq truncate_below(const FiniteSeq& x, double eps) {
  Eigen::ArrayXd v = x.values();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) < eps) v[i] = 0.0;
  }
  return FiniteSeq(x.start(), std::move(v)).trimmed();
}

}  // namespace

M3Config make_m3_config(const SpectralModel& model, Index lo, Index hi,
                        double trunc_eps, std::optional<Index> shift_margin,
                        std::uint64_t theta_seed) {
  if (!model.nonnegative()) {
    throw std::invalid_argument("M3 construction needs a nonnegative model");
  }
  if (lo > hi) throw std::invalid_argument("empty M3 window");
  if (trunc_eps <= 0.0 || trunc_eps >= 1.0) {
    throw std::invalid_argument("trunc_eps must lie in (0,1)");
  }

  Index required = 0;
  if (model.kind() == SpectralModel::Kind::Geometric) {
    required = static_cast<Index>(
                   std::ceil(std::log(trunc_eps) / std::log(model.rho()))) +
               1;
  } else if (auto table = model.enumerate_spectral()) {
    for (const auto& wp : *table) {
      required = std::max({required, std::abs(wp.path.start()),
                           std::abs(wp.path.end() - 1)});
    }
  } else {
    required = 64;
  }
  if (shift_margin && *shift_margin < required) {
    throw std::invalid_argument("shift_margin below the model's support bound");
  }

  double theta;
  if (auto exact = model.exact_theta()) {
    theta = *exact;
  } else {
    theta = theta_candidate(model, ThetaMethod::InfargmaxProb, 200'000,
                            default_lanes(), theta_seed)
                .value;
  }
  if (theta <= 0.0) {
    throw std::invalid_argument("nonpositive extremal-index estimate for " +
                                model.name());
  }
  return M3Config{model, lo, hi, trunc_eps, shift_margin.value_or(required), theta};
}

MaxStablePath simulate_m3(const M3Config& cfg, Rng& rng) {
  Index t_lo = cfg.lo - cfg.shift_margin;
  Index t_hi = cfg.hi + cfg.shift_margin;
  double rate = cfg.theta * static_cast<double>(t_hi - t_lo + 1);
  double inv_alpha = 1.0 / cfg.model.alpha();

  Index len = cfg.hi - cfg.lo + 1;
  Eigen::ArrayXd zeta = Eigen::ArrayXd::Zero(len);
  Index uncovered = len;
  double gamma = 0.0;

  for (std::uint64_t iter = 0;; ++iter) {
    if (iter > 50'000'000) {
      throw std::runtime_error("M3 simulation failed to terminate");
    }
    gamma += exponential(rng);
    double p = std::pow(gamma / rate, -inv_alpha);
    if (uncovered == 0 && p <= zeta.minCoeff()) break;

    Index t = uniform_int(rng, t_lo, t_hi);
    FiniteSeq q = truncate_below(
        cfg.model.sample_spectral_conditioned(
            SpectralModel::Condition::NoBackwardExceedance, rng),
        cfg.trunc_eps);
    Index a = std::max(cfg.lo, q.start() + t);
    Index b = std::min(cfg.hi, q.end() - 1 + t);
    for (Index j = a; j <= b; ++j) {
      double w = p * q[j - t];
      double& cell = zeta[j - cfg.lo];
      if (cell == 0.0 && w > 0.0) --uncovered;
      if (w > cell) cell = w;
    }
  }
  return {FiniteSeq(cfg.lo, std::move(zeta)), 0};
}

Estimate fdd_log_survival(const FiniteSeq& levels, const SpectralModel& model,
                          std::uint64_t n, unsigned lanes, std::uint64_t seed) {
  std::vector<std::pair<Index, double>> finite;
  for (Index i = 0; i < levels.size(); ++i) {
    double y = levels.values()[i];
    if (std::isinf(y)) continue;
    if (!(y > 0.0)) throw std::invalid_argument("levels must be positive");
    finite.emplace_back(levels.start() + i, y);
  }
  if (finite.empty()) return Estimate::exact(0.0);
  double alpha = model.alpha();

  return mc_mean(n, lanes, seed, [&, finite](Rng& rng) {
    FiniteSeq theta = model.sample_spectral(rng);
    double total = 0.0;
    for (auto [h, yh] : finite) {
      // Ratio path theta_j / y_{j+h}: zero wherever the level is infinite.
      Index lo = std::max(theta.start(), finite.front().first - h);
      Index hi = std::min(theta.end() - 1, finite.back().first - h);
      if (lo > hi) continue;
      Eigen::ArrayXd ratio = Eigen::ArrayXd::Zero(hi - lo + 1);
      for (auto [c, yc] : finite) {
        Index j = c - h;
        if (j >= lo && j <= hi) ratio[j - lo] = theta[j] / yc;
      }
      if (infargmax(FiniteSeq(lo, ratio)) == ArgmaxResult::finite(0)) {
        total += std::pow(yh, -alpha);
      }
    }
    return total;
  });
}

ZSpectralEstimate spectral_from_Z(const std::function<FiniteSeq(Rng&)>& z_sampler,
                                  double alpha, Index h, const Functional& f,
                                  std::uint64_t n, unsigned lanes,
                                  std::uint64_t seed) {
  auto stats = mc_run(n, lanes, seed, 3, [&](Rng& rng, std::span<double> out) {
    FiniteSeq z = z_sampler(rng);
    double zh = z[-h];
    if (zh == 0.0) {
      out[0] = out[1] = out[2] = 0.0;
      return;
    }
    double w = std::pow(zh, alpha);
    out[0] = w * f(shift(z, h).divided_by(zh));
    out[1] = w;
    out[2] = w * w;
  });

  ZSpectralEstimate res;
  res.est = stats[0];
  double mean_w = stats[1].value, mean_w2 = stats[2].value;
  double n_d = static_cast<double>(stats[0].n_samples);
  res.effective_sample_size =
      mean_w2 > 0.0 ? n_d * mean_w * mean_w / mean_w2 : 0.0;
  res.weight_warning = res.effective_sample_size < n_d / 100.0;
  return res;
}

std::function<FiniteSeq(Rng&)> scaled_profile_z_sampler(const FiniteSeq& profile,
                                                        double alpha,
                                                        Index location_range) {
  FiniteSeq c = profile.trimmed();
  if (c.empty() || !(c.values() >= 0.0).all()) {
    throw std::invalid_argument("profile must be nonnegative and nonzero");
  }
  double norm = std::pow(c.values().pow(alpha).sum(), 1.0 / alpha);
  double count = static_cast<double>(2 * location_range + 1);
  // Location L uniform on [-M, M]; height count^{1/alpha}/||c||_alpha makes
  // E[Z_j^alpha] = 1 for every coordinate with distance at least span from
  // the edges of the range.
  double scale = std::pow(count, 1.0 / alpha) / norm;
  return [c, scale, location_range](Rng& rng) {
    Index l = uniform_int(rng, -location_range, location_range);
    return shift(c.scaled(scale), l);
  };
}

}  // namespace taillab
