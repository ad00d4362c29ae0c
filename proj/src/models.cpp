#include "taillab/models.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace taillab {

namespace {

constexpr double kPathTrunc = 1e-12;

std::vector<double> weight_cdf(const std::vector<WeightedPath>& table) {
  std::vector<double> cdf;
  cdf.reserve(table.size());
  double acc = 0.0;
  for (const auto& wp : table) acc += wp.weight, cdf.push_back(acc);
  if (std::abs(acc - 1.0) > 1e-9) {
    throw std::invalid_argument("spectral table weights must sum to 1");
  }
  cdf.back() = 1.0;
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  double u = uniform01(rng);
  return std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
}

}  // namespace

SpectralModel SpectralModel::iid(double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  SpectralModel m;
  m.kind_ = Kind::Iid;
  m.alpha_ = alpha;
  std::ostringstream n;
  n << "iid(alpha=" << alpha << ")";
  m.name_ = n.str();
  return m;
}

SpectralModel SpectralModel::deterministic(double alpha, FiniteSeq theta_path) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  FiniteSeq p = theta_path.trimmed();
  if (std::abs(p[0]) != 1.0) {
    throw std::invalid_argument("deterministic path must have |theta_0| = 1");
  }
  SpectralModel m;
  m.kind_ = Kind::Deterministic;
  m.alpha_ = alpha;
  m.nonnegative_ = (p.values() >= 0.0).all();
  m.table_ = {{p, 1.0}};
  m.table_cdf_ = {1.0};
  std::ostringstream n;
  n << "deterministic(alpha=" << alpha << ", path=" << p.to_string() << ")";
  m.name_ = n.str();
  return m;
}

SpectralModel SpectralModel::moving_average(double alpha, FiniteSeq coeffs,
                                            double pos_prob) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (pos_prob < 0.0 || pos_prob > 1.0) {
    throw std::invalid_argument("pos_prob must lie in [0,1]");
  }
  FiniteSeq c = coeffs.trimmed();
  if (c.empty()) throw std::invalid_argument("moving average needs a nonzero coefficient");
  if (!(c.values() >= 0.0).all()) {
    throw std::invalid_argument("moving-average coefficients must be nonnegative");
  }
  SpectralModel m;
  m.kind_ = Kind::MovingAverage;
  m.alpha_ = alpha;
  m.pos_prob_ = pos_prob;
  m.nonnegative_ = pos_prob == 1.0;
  m.coeffs_ = c;

  // P(J = k) = c_k^alpha / ||c||_alpha^alpha; the dominating innovation sits
  // k steps back, so the path is c_{k+j}/c_k anchored at j = 0.
  double norm = c.values().pow(alpha).sum();
  for (Index i = 0; i < c.size(); ++i) {
    if (c.values()[i] == 0.0) continue;
    Index k = c.start() + i;
    double ck = c.values()[i];
    FiniteSeq path(c.start() - k, (c.values() / ck).eval());
    double w = std::pow(ck, alpha) / norm;
    if (pos_prob > 0.0) m.table_.push_back({path, w * pos_prob});
    if (pos_prob < 1.0) m.table_.push_back({path.scaled(-1.0), w * (1.0 - pos_prob)});
  }
  m.table_cdf_ = weight_cdf(m.table_);
  std::ostringstream n;
  n << "ma(alpha=" << alpha << ", coeffs=" << c.to_string() << ", p=" << pos_prob
    << ")";
  m.name_ = n.str();
  return m;
}

SpectralModel SpectralModel::geometric(double alpha, double rho) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("rho must lie in (0,1)");
  SpectralModel m;
  m.kind_ = Kind::Geometric;
  m.alpha_ = alpha;
  m.rho_ = rho;
  m.geo_forward_len_ =
      static_cast<Index>(std::ceil(std::log(kPathTrunc) / std::log(rho))) + 1;
  std::ostringstream n;
  n << "geometric(alpha=" << alpha << ", rho=" << rho << ")";
  m.name_ = n.str();
  return m;
}

SpectralModel SpectralModel::empirical(double alpha, std::vector<WeightedPath> table) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (table.empty()) throw std::invalid_argument("empirical table must be nonempty");
  SpectralModel m;
  m.kind_ = Kind::Empirical;
  m.alpha_ = alpha;
  m.nonnegative_ = true;
  for (auto& wp : table) {
    wp.path = wp.path.trimmed();
    if (std::abs(wp.path[0]) != 1.0) {
      throw std::invalid_argument("empirical paths must have |theta_0| = 1");
    }
    if (!(wp.path.values() >= 0.0).all()) m.nonnegative_ = false;
  }
  m.table_ = std::move(table);
  m.table_cdf_ = weight_cdf(m.table_);
  std::ostringstream n;
  n << "empirical(alpha=" << alpha << ", paths=" << m.table_.size() << ")";
  m.name_ = n.str();
  return m;
}

FiniteSeq SpectralModel::sample_spectral(Rng& rng) const {
  switch (kind_) {
    case Kind::Iid:
      return FiniteSeq::spike(0, 1.0);
    case Kind::Deterministic:
    case Kind::MovingAverage:
    case Kind::Empirical:
      return table_[sample_cdf(table_cdf_, rng)].path;
    case Kind::Geometric: {
      // Backward depth N with P(N >= m) = rho^{m alpha}; theta_j = rho^j on
      // [-N, M] with the forward tail cut below kPathTrunc.
      double ext = std::pow(rho_, alpha_);
      Index n_back = 0;
      while (uniform01(rng) < ext) ++n_back;
      Index len = n_back + geo_forward_len_;
      Eigen::ArrayXd v(len);
      for (Index i = 0; i < len; ++i) {
        v[i] = std::pow(rho_, static_cast<double>(i - n_back));
      }
      return FiniteSeq(-n_back, std::move(v));
    }
  }
  throw std::logic_error("unreachable");
}

FiniteSeq SpectralModel::sample_spectral_conditioned(Condition cond, Rng& rng,
                                                     std::uint64_t budget) const {
  for (std::uint64_t attempt = 1; attempt <= budget; ++attempt) {
    FiniteSeq theta = sample_spectral(rng);
    if (cond == Condition::InfargmaxZero) {
      if (infargmax(theta) == ArgmaxResult::finite(0)) return theta;
    } else {
      double r = pareto(rng, alpha_);
      FiniteSeq y = theta.scaled(r);
      if (window_max(y, kNegInfIndex, -1) <= 1.0) {
        return y.divided_by(supnorm(y));
      }
    }
  }
  double rate_bound = 1.0 / static_cast<double>(budget);
  throw RejectionBudgetError("conditioned sampling budget (" +
                                 std::to_string(budget) + ") exceeded for " +
                                 name_ + "; acceptance rate below " +
                                 std::to_string(rate_bound),
                             rate_bound);
}

std::optional<double> SpectralModel::exact_theta() const {
  if (kind_ == Kind::Geometric) return 1.0 - std::pow(rho_, alpha_);
  if (auto table = enumerate_spectral()) {
    double t = 0.0;
    for (const auto& wp : *table) {
      if (infargmax(wp.path) == ArgmaxResult::finite(0)) t += wp.weight;
    }
    return t;
  }
  return std::nullopt;
}

std::optional<std::vector<WeightedPath>> SpectralModel::enumerate_spectral() const {
  if (kind_ == Kind::Iid) {
    return std::vector<WeightedPath>{{FiniteSeq::spike(0, 1.0), 1.0}};
  }
  if (kind_ == Kind::Geometric) return std::nullopt;
  return table_;
}

TimeSeries simulate_series(const SpectralModel& model, Index length,
                           std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("series length must be >= 1");
  if (!model.has_series()) {
    throw std::invalid_argument("no canonical series attached to " + model.name());
  }
  Rng rng = lane_rng(seed, 0);
  TimeSeries ts;
  ts.seed = seed;
  ts.provenance = model.name();
  if (model.kind() == SpectralModel::Kind::Iid) {
    ts.values.resize(length);
    for (Index t = 0; t < length; ++t) ts.values[t] = pareto(rng, model.alpha());
    return ts;
  }
  // Innovations are Pareto(alpha) exactly, signed by the tail balance; the
  // first span-1 of them are warm-up so the output is stationary.
  const FiniteSeq& c = model.coeffs();
  Index span = c.size();
  Eigen::ArrayXd z(length + span);
  for (Index i = 0; i < z.size(); ++i) {
    double s = uniform01(rng) < model.pos_prob() ? 1.0 : -1.0;
    z[i] = s * pareto(rng, model.alpha());
  }
  // X_t = sum_k c_k Z_{t-k} with Z_m stored at z[m + (last coefficient index)].
  Index k_last = c.end() - 1;
  ts.values = Eigen::ArrayXd::Zero(length);
  for (Index i = 0; i < c.size(); ++i) {
    double ck = c.values()[i];
    if (ck == 0.0) continue;
    Index k = c.start() + i;
    ts.values += ck * z.segment(k_last - k, length);
  }
  return ts;
}

std::vector<FiniteSeq> empirical_tail_process(const TimeSeries& series, double u,
                                              Index half_window) {
  if (u <= 0.0) throw std::invalid_argument("threshold must be positive");
  const auto& x = series.values;
  std::vector<FiniteSeq> out;
  for (Index t = half_window; t + half_window < x.size(); ++t) {
    if (std::abs(x[t]) > u) {
      Eigen::ArrayXd w = x.segment(t - half_window, 2 * half_window + 1) / u;
      out.emplace_back(-half_window, std::move(w));
    }
  }
  if (out.size() < 200) {
    throw std::runtime_error("too few exceedances for tail-process oracle: " +
                             std::to_string(out.size()));
  }
  return out;
}

}  // namespace taillab
