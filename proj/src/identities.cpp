#include "taillab/identities.hpp"

#include <cmath>

namespace taillab {

namespace {

double pos_pow(double v, double a) { return v > 0.0 ? std::pow(v, a) : 0.0; }

// x log|x| with the 0 log 0 = 0 convention.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

double alpha_norm_pow(const FiniteSeq& x, double alpha) {
  if (x.empty()) return 0.0;
  return x.values().abs().pow(alpha).sum();
}

}  // namespace

double IdentityReport::pair_sigmas(const PairCheck& p) const {
  if (p.diff) return paired_sigmas(sides[p.a].est, sides[p.b].est, *p.diff);
  return discrepancy_sigmas(sides[p.a].est, sides[p.b].est);
}

void IdentityReport::finalize() {
  if (pairs.empty()) {
    for (std::size_t i = 0; i < sides.size(); ++i) {
      for (std::size_t j = i + 1; j < sides.size(); ++j) {
        pairs.push_back({static_cast<int>(i), static_cast<int>(j), {}});
      }
    }
  }
  max_sigmas = 0.0;
  for (const auto& p : pairs) max_sigmas = std::max(max_sigmas, pair_sigmas(p));
  pass = max_sigmas <= tol;
}

const char* theta_method_name(ThetaMethod m) {
  switch (m) {
    case ThetaMethod::ForwardDef: return "forward_def";
    case ThetaMethod::BackwardDef: return "backward_def";
    case ThetaMethod::InfargmaxProb: return "infargmax_prob";
    case ThetaMethod::RatioSupToAlphaSum: return "ratio_sup_alpha_sum";
    case ThetaMethod::ForwardDiff: return "forward_diff";
    case ThetaMethod::HarmonicCount: return "harmonic_count";
  }
  return "?";
}

Estimate theta_candidate(const SpectralModel& model, ThetaMethod method,
                         std::uint64_t n, unsigned lanes, std::uint64_t seed) {
  double alpha = model.alpha();
  switch (method) {
    case ThetaMethod::ForwardDef:
      // P(sup_{j>=1} |Y_j| <= 1) with the Pareto radius integrated out.
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        double f = window_max(model.sample_spectral(rng), 1, kPosInfIndex);
        return f < 1.0 ? 1.0 - std::pow(f, alpha) : 0.0;
      });
    case ThetaMethod::BackwardDef:
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        return q_weight(model.sample_spectral(rng), alpha);
      });
    case ThetaMethod::InfargmaxProb:
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        return infargmax(model.sample_spectral(rng)) == ArgmaxResult::finite(0)
                   ? 1.0
                   : 0.0;
      });
    case ThetaMethod::RatioSupToAlphaSum:
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        FiniteSeq theta = model.sample_spectral(rng);
        return std::pow(supnorm(theta), alpha) / alpha_norm_pow(theta, alpha);
      });
    case ThetaMethod::ForwardDiff:
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        FiniteSeq theta = model.sample_spectral(rng);
        return std::pow(window_max(theta, 0, kPosInfIndex), alpha) -
               std::pow(window_max(theta, 1, kPosInfIndex), alpha);
      });
    case ThetaMethod::HarmonicCount:
      return mc_mean(n, lanes, seed, [&](Rng& rng) {
        FiniteSeq y = sample_tail_process(model, rng);
        double count = Functional::count_exceed(1.0)(y);
        return count > 0.0 ? 1.0 / count : 1.0;
      });
  }
  throw std::logic_error("unreachable");
}

IdentityReport theta_candidate_hexagon(const SpectralModel& model, std::uint64_t n,
                                       unsigned lanes, std::uint64_t seed,
                                       double tol) {
  IdentityReport rep;
  rep.name = "extremal_index_hexagon[" + model.name() + "]";
  rep.tol = tol;
  if (auto exact = model.exact_theta()) {
    rep.sides.push_back({"exact", Estimate::exact(*exact)});
  }
  const ThetaMethod methods[] = {
      ThetaMethod::ForwardDef,         ThetaMethod::BackwardDef,
      ThetaMethod::InfargmaxProb,      ThetaMethod::RatioSupToAlphaSum,
      ThetaMethod::ForwardDiff,        ThetaMethod::HarmonicCount};
  int i = 0;
  for (ThetaMethod m : methods) {
    rep.sides.push_back(
        {theta_method_name(m),
         theta_candidate(model, m, n, lanes, derive_seed(seed, 1, i++))});
  }
  rep.finalize();
  return rep;
}

IdentityReport check_Q_theta_identity(const Functional& h, const SpectralModel& model,
                                      std::uint64_t n, unsigned lanes,
                                      std::uint64_t seed, double tol) {
  if (!h.shift_invariant()) {
    throw std::invalid_argument("check_Q_theta_identity: " + h.name() +
                                " is not declared shift invariant");
  }
  double alpha = model.alpha();
  bool alpha_homogeneous =
      h.degree() && std::abs(*h.degree() - alpha) <= 1e-12;
  std::size_t n_sides = alpha_homogeneous ? 3 : 2;
  std::size_t n_diffs = alpha_homogeneous ? 3 : 1;

  auto stats = mc_run(n, lanes, seed, n_sides + n_diffs,
                      [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    out[0] = q_weight(theta, alpha) * h(q_path(theta));
    out[1] = infargmax(theta) == ArgmaxResult::finite(0) ? h(theta) : 0.0;
    if (alpha_homogeneous) {
      out[2] = h(theta) / alpha_norm_pow(theta, alpha);
      out[3] = out[0] - out[1];
      out[4] = out[0] - out[2];
      out[5] = out[1] - out[2];
    } else {
      out[2] = out[0] - out[1];
    }
  });

  IdentityReport rep;
  rep.name = "Q_theta[" + h.name() + ", " + model.name() + "]";
  rep.tol = tol;
  rep.sides.push_back({"theta_E_H_Q", stats[0]});
  rep.sides.push_back({"E_H_theta_infargmax0", stats[1]});
  if (alpha_homogeneous) {
    rep.sides.push_back({"E_H_theta_alpha_norm", stats[2]});
    rep.pairs = {{0, 1, stats[3]}, {0, 2, stats[4]}, {1, 2, stats[5]}};
  } else {
    rep.pairs = {{0, 1, stats[2]}};
  }
  rep.finalize();
  return rep;
}

IdentityReport qsum_alpha_identity(const SpectralModel& model, std::uint64_t n,
                                   unsigned lanes, std::uint64_t seed, double tol) {
  double alpha = model.alpha();
  // The l1-moment side has infinite variance for geometric laws once
  // alpha >= 2 (the mean is still finite); skip the pair where the Monte
  // Carlo comparison would be meaningless.
  bool l1_pair = model.kind() != SpectralModel::Kind::Geometric || alpha < 2.0;
  std::size_t n_stats = l1_pair ? 4 : 1;

  auto stats = mc_run(n, lanes, seed, n_stats, [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    double w = q_weight(theta, alpha);
    FiniteSeq q = q_path(theta);
    out[0] = w * alpha_norm_pow(q, alpha);
    if (l1_pair) {
      out[1] = w * std::pow(pnorm(q, 1.0), alpha);
      out[2] = std::pow(pnorm(theta, 1.0), alpha - 1.0);
      out[3] = out[1] - out[2];
    }
  });

  IdentityReport rep;
  rep.name = "qsum_alpha[" + model.name() + "]";
  rep.tol = tol;
  rep.sides.push_back({"theta_sum_Qj_alpha", stats[0]});
  rep.sides.push_back({"one", Estimate::exact(1.0)});
  rep.pairs.push_back({0, 1, {}});
  if (l1_pair) {
    rep.sides.push_back({"theta_E_l1Q_alpha", stats[1]});
    rep.sides.push_back({"E_l1theta_alpha_minus_1", stats[2]});
    rep.pairs.push_back({2, 3, stats[3]});
  }
  rep.finalize();
  return rep;
}

IdentityReport check_forward_identity(const Functional& h, const SpectralModel& model,
                                      std::uint64_t n, unsigned lanes,
                                      std::uint64_t seed, double tol) {
  if (!h.shift_invariant()) {
    throw std::invalid_argument("check_forward_identity: " + h.name() +
                                " is not declared shift invariant");
  }
  double alpha = model.alpha();
  if (!h.degree() || std::abs(*h.degree() - alpha) > 1e-12) {
    throw std::invalid_argument("check_forward_identity: " + h.name() +
                                " must be homogeneous of the model's tail index");
  }

  auto stats = mc_run(n, lanes, seed, 3, [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    out[0] = q_weight(theta, alpha) * h(q_path(theta));
    out[1] = h(theta.restrict(0, kPosInfIndex)) - h(theta.restrict(1, kPosInfIndex));
    out[2] = out[0] - out[1];
  });

  IdentityReport rep;
  rep.name = "forward[" + h.name() + ", " + model.name() + "]";
  rep.tol = tol;
  rep.sides.push_back({"theta_E_H_Q", stats[0]});
  rep.sides.push_back({"E_forward_diff", stats[1]});
  rep.pairs = {{0, 1, stats[2]}};
  rep.finalize();
  return rep;
}

IdentityReport log_identities_alpha1(const SpectralModel& model, std::uint64_t n,
                                     unsigned lanes, std::uint64_t seed, double tol) {
  if (model.alpha() != 1.0) {
    throw std::invalid_argument("log identities require alpha = 1");
  }
  if (!model.nonnegative()) {
    throw std::invalid_argument("log identities require a nonnegative model");
  }

  auto stats = mc_run(n, lanes, seed, 6, [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    double w = q_weight(theta, 1.0);
    FiniteSeq q = q_path(theta);
    double l1q = pnorm(q, 1.0);

    double logsum = 0.0, sum_q = 0.0, sum_qlogq = 0.0;
    for (Index i = 0; i < q.size(); ++i) {
      double v = q.values()[i];
      if (v == 0.0) continue;
      logsum += v * std::log(l1q / v);
      sum_q += v;
      sum_qlogq += xlogx(v);
    }
    out[0] = w * logsum;
    out[1] = std::log(pnorm(theta, 1.0));
    out[2] = w * (xlogx(sum_q) - sum_qlogq);

    double s0 = theta.restrict(0, kPosInfIndex).values().sum();
    double s1 = theta.restrict(1, kPosInfIndex).values().sum();
    out[3] = xlogx(s0) - xlogx(s1);
    out[4] = out[0] - out[1];
    out[5] = out[2] - out[3];
  });

  IdentityReport rep;
  rep.name = "log_alpha1[" + model.name() + "]";
  rep.tol = tol;
  rep.sides.push_back({"theta_sum_Qj_log", stats[0]});
  rep.sides.push_back({"E_log_l1_theta", stats[1]});
  rep.sides.push_back({"theta_SlogS_minus_sum", stats[2]});
  rep.sides.push_back({"E_forward_SlogS_diff", stats[3]});
  rep.pairs = {{0, 1, stats[4]}, {2, 3, stats[5]}};
  rep.finalize();
  return rep;
}

ClusterIndexCurve cluster_index(const Functional& h_base, const SpectralModel& model,
                                int k_max, std::uint64_t n, unsigned lanes,
                                std::uint64_t seed, double tol) {
  if (!h_base.lipschitz_l1()) {
    throw std::invalid_argument("cluster_index: " + h_base.name() +
                                " carries no declared l1 Lipschitz bound");
  }
  if (!h_base.degree() || *h_base.degree() != 1.0 || !h_base.shift_invariant()) {
    throw std::invalid_argument(
        "cluster_index needs a 1-homogeneous shift-invariant functional");
  }
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  double alpha = model.alpha();
  int burn = k_max > 6 ? 5 : 0;
  std::size_t n_stats = 2 * static_cast<std::size_t>(k_max) + 3;

  auto stats = mc_run(n, lanes, seed, n_stats, [&](Rng& rng, std::span<double> out) {
    FiniteSeq theta = model.sample_spectral(rng);
    double running = 0.0;
    for (int idx = 0; idx < k_max; ++idx) {
      double d = pos_pow(h_base(theta.restrict(0, idx)), alpha) -
                 pos_pow(h_base(theta.restrict(1, idx)), alpha);
      out[idx] = d;
      running += d;
      out[k_max + idx] = running;
    }
    out[2 * k_max] =
        q_weight(theta, alpha) * pos_pow(h_base(q_path(theta)), alpha);
    double b_burn = burn > 0 ? out[k_max + burn - 1] : 0.0;
    out[2 * k_max + 1] = (running - b_burn) / static_cast<double>(k_max - burn);
    out[2 * k_max + 2] = out[2 * k_max + 1] - out[2 * k_max];
  });

  ClusterIndexCurve curve;
  for (int k = 1; k <= k_max; ++k) {
    ClusterIndexPoint p;
    p.k = k;
    p.b_k = stats[k_max + k - 1];
    p.diff = stats[k - 1];
    curve.points.push_back(p);
  }
  curve.limit = stats[2 * k_max];
  Estimate top = stats[2 * k_max - 1];
  curve.cesaro = {top.value / k_max, top.stderr_ / k_max, top.n_samples, top.seed};
  curve.tail_slope = stats[2 * k_max + 1];
  curve.sigmas = paired_sigmas(curve.tail_slope, curve.limit, stats[2 * k_max + 2]);
  curve.pass = curve.sigmas <= tol;
  return curve;
}

}  // namespace taillab
