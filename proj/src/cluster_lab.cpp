#include "taillab/cluster_lab.hpp"

#include <algorithm>
#include <cmath>

namespace taillab {

namespace {

double empirical_quantile(Eigen::ArrayXd sorted_abs, double q) {
  Index n = sorted_abs.size();
  Index idx = std::min<Index>(n - 1, static_cast<Index>(std::floor(q * n)));
  return sorted_abs[idx];
}

FiniteSeq canonicalize_or_zero(const FiniteSeq& x) {
  if (x.is_zero()) return FiniteSeq::zero();
  return canonical_anchor(x.trimmed());
}

}  // namespace

BlockingScheme make_blocking_scheme(const TimeSeries& series,
                                    std::optional<Index> r_n,
                                    std::optional<double> c_n,
                                    std::vector<double> u_grid) {
  BlockingScheme s;
  s.n = series.values.size();
  if (s.n < 100) throw std::invalid_argument("series too short for blocking");
  s.r_n = r_n.value_or(
      static_cast<Index>(std::floor(std::pow(static_cast<double>(s.n), 0.35))));
  if (s.r_n < 1 || s.r_n > s.n) throw std::invalid_argument("bad block length");
  if (c_n) {
    s.c_n = *c_n;
  } else {
    Eigen::ArrayXd a = series.values.abs();
    std::sort(a.data(), a.data() + a.size());
    double q = 1.0 - std::pow(static_cast<double>(s.n), -0.6);
    s.c_n = empirical_quantile(std::move(a), q);
  }
  s.u_grid = std::move(u_grid);
  s.k_n = s.n / s.r_n;
  s.marginal_exceed_prob =
      static_cast<double>((series.values.abs() > s.c_n).count()) /
      static_cast<double>(s.n);
  s.monitor = static_cast<double>(s.r_n) * s.marginal_exceed_prob;
  return s;
}

std::vector<ClusterBlock> extract_blocks(const TimeSeries& series,
                                         const BlockingScheme& scheme,
                                         double scale) {
  std::vector<ClusterBlock> blocks;
  blocks.reserve(scheme.k_n);
  for (Index i = 0; i < scheme.k_n; ++i) {
    Eigen::ArrayXd v = scale * series.values.segment(i * scheme.r_n, scheme.r_n);
    blocks.push_back({canonicalize_or_zero(FiniteSeq(1, std::move(v))), i});
  }
  return blocks;
}

Estimate empirical_cluster_measure(const TimeSeries& series,
                                   const BlockingScheme& scheme,
                                   const Functional& h,
                                   std::uint64_t bootstrap_seed,
                                   int bootstrap_rounds) {
  if (!h.shift_invariant()) {
    throw std::invalid_argument("cluster functionals must be shift invariant");
  }
  if (scheme.marginal_exceed_prob == 0.0) {
    throw std::runtime_error("no marginal exceedances of c_n in the series");
  }
  auto blocks = extract_blocks(series, scheme, 1.0 / scheme.c_n);
  Eigen::ArrayXd vals(scheme.k_n);
  for (Index i = 0; i < scheme.k_n; ++i) {
    vals[i] = blocks[i].canonical.is_zero() ? h(FiniteSeq::zero())
                                            : h(blocks[i].canonical);
  }
  double denom = scheme.monitor;
  double est = vals.mean() / denom;

  Rng rng = lane_rng(bootstrap_seed, 0);
  Welford boot;
  for (int b = 0; b < bootstrap_rounds; ++b) {
    double acc = 0.0;
    for (Index i = 0; i < scheme.k_n; ++i) {
      acc += vals[uniform_int(rng, 0, scheme.k_n - 1)];
    }
    boot.add(acc / static_cast<double>(scheme.k_n) / denom);
  }
  double se = boot.stderr_of_mean() * std::sqrt(static_cast<double>(boot.count()));
  return {est, se, static_cast<std::uint64_t>(scheme.k_n), bootstrap_seed};
}

NuStarResult nu_star(const Functional& h, const SpectralModel& model,
                     std::uint64_t n, unsigned lanes, std::uint64_t seed,
                     double tol) {
  if (!h.shift_invariant()) {
    throw std::invalid_argument("nu_star probes must be shift invariant");
  }
  NuStarResult res;
  res.q_anchored = tail_measure_eval(h, model, NuMode::QAnchored, n, lanes, seed);
  res.infargmax_anchored = tail_measure_eval(h, model, NuMode::InfargmaxAnchored,
                                             n, lanes, derive_seed(seed, 21, 1));
  res.sigmas = discrepancy_sigmas(res.q_anchored, res.infargmax_anchored);
  res.pass = res.sigmas <= tol;
  return res;
}

IdentityReport normalized_cluster_law(const TimeSeries& series,
                                      const BlockingScheme& scheme, double u,
                                      const std::vector<Functional>& probes,
                                      const SpectralModel& model,
                                      std::uint64_t n_model, unsigned lanes,
                                      std::uint64_t seed, double tol) {
  auto blocks = extract_blocks(series, scheme, 1.0);
  double level = scheme.c_n * u;
  std::vector<FiniteSeq> qualifying;
  std::vector<double> maxima;
  for (const auto& b : blocks) {
    double m = supnorm(b.canonical);
    if (m > level) {
      qualifying.push_back(b.canonical.divided_by(m));
      maxima.push_back(m);
    }
  }
  std::size_t m_blocks = qualifying.size();
  if (m_blocks < 100) {
    throw std::runtime_error("insufficient qualifying blocks: " +
                             std::to_string(m_blocks));
  }

  IdentityReport rep;
  {
    std::ostringstream os;
    os << "normalized_cluster_law[u=" << u << "]";
    rep.name = os.str();
  }
  rep.tol = tol;

  int side = 0;
  for (const auto& h : probes) {
    if (!h.shift_invariant()) {
      throw std::invalid_argument("probes must be shift invariant");
    }
    Welford emp;
    for (const auto& q : qualifying) emp.add(h(q));
    rep.sides.push_back({"block[" + h.name() + "]", emp.estimate(0)});
    // Model side: iid Q draws, evaluated on the same canonical representative.
    Estimate model_side = mc_mean(n_model, lanes, derive_seed(seed, 22, side), [&](Rng& rng) {
      FiniteSeq q = model.sample_spectral_conditioned(
          SpectralModel::Condition::NoBackwardExceedance, rng);
      return h(canonical_anchor(q));
    });
    rep.sides.push_back({"Q[" + h.name() + "]", model_side});
    rep.pairs.emplace_back(2 * side, 2 * side + 1);
    ++side;
  }

  // Radial factorization: block*/(c_n u) given qualification is Pareto(alpha).
  for (double v : {1.5, 2.0}) {
    double cnt = 0.0;
    for (double m : maxima) {
      if (m > level * v) cnt += 1.0;
    }
    double p = cnt / static_cast<double>(m_blocks);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(m_blocks));
    std::ostringstream vs;
    vs << "[v=" << v << "]";
    rep.sides.push_back({"radial_emp" + vs.str(), {p, se, m_blocks, 0}});
    rep.sides.push_back({"radial_pareto" + vs.str(),
                         Estimate::exact(std::pow(v, -model.alpha()))});
    int base = static_cast<int>(rep.sides.size());
    rep.pairs.emplace_back(base - 2, base - 1);
  }
  rep.finalize();
  return rep;
}

std::vector<AnticlusteringPoint> anticlustering_diagnostic(
    const TimeSeries& series, const BlockingScheme& scheme,
    const std::vector<Index>& m_grid, double u) {
  double level = scheme.c_n * u;
  const auto& x = series.values;
  Index n = x.size(), r = scheme.r_n;
  std::vector<Index> exceed;
  for (Index t = r; t + r < n; ++t) {
    if (std::abs(x[t]) > level) exceed.push_back(t);
  }
  if (exceed.size() < 20) {
    throw std::runtime_error("insufficient exceedances for anticlustering: " +
                             std::to_string(exceed.size()));
  }
  std::vector<AnticlusteringPoint> out;
  for (Index m : m_grid) {
    if (m < 1 || m > r) throw std::invalid_argument("m must lie in [1, r_n]");
    double cnt = 0.0;
    for (Index t : exceed) {
      bool hit = false;
      for (Index i = m; i <= r && !hit; ++i) {
        hit = std::abs(x[t - i]) > level || std::abs(x[t + i]) > level;
      }
      if (hit) cnt += 1.0;
    }
    double p = cnt / static_cast<double>(exceed.size());
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(exceed.size()));
    out.push_back({m, {p, se, exceed.size(), 0}});
  }
  return out;
}

}  // namespace taillab
