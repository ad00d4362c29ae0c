#pragma once

#include "taillab/random.hpp"
#include "taillab/sequence.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace taillab {

struct WeightedPath {
  FiniteSeq path;
  double weight = 0.0;
};

/// Thrown when conditioned sampling exhausts its rejection budget; carries the
/// acceptance-rate estimate observed so far.
struct RejectionBudgetError : std::runtime_error {
  RejectionBudgetError(const std::string& what, double rate)
      : std::runtime_error(what), acceptance_rate(rate) {}
  double acceptance_rate;
};

/// A generative law for the spectral tail process: every sample has
/// |theta_0| = 1 and finite support after truncation.  Deterministic and
/// empirical laws are only admissible when they satisfy the time change
/// formula; certify_time_change in tail_kernel.hpp checks that numerically.
class SpectralModel {
 public:
  enum class Kind { Iid, Deterministic, MovingAverage, Geometric, Empirical };
  enum class Condition { InfargmaxZero, NoBackwardExceedance };

  static SpectralModel iid(double alpha);
  static SpectralModel deterministic(double alpha, FiniteSeq theta_path);
  /// X_t = sum_k c_k Z_{t-k} with nonnegative coefficients and innovations of
  /// tail balance pos_prob (+1 with probability pos_prob, else -1).
  static SpectralModel moving_average(double alpha, FiniteSeq coeffs,
                                      double pos_prob = 1.0);
  static SpectralModel geometric(double alpha, double rho);
  static SpectralModel empirical(double alpha, std::vector<WeightedPath> table);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::string& name() const { return name_; }
  bool nonnegative() const { return nonnegative_; }
  double rho() const { return rho_; }
  double pos_prob() const { return pos_prob_; }
  const FiniteSeq& coeffs() const { return coeffs_; }

  FiniteSeq sample_spectral(Rng& rng) const;
  FiniteSeq sample_spectral_conditioned(Condition cond, Rng& rng,
                                        std::uint64_t budget = 10'000'000) const;

  /// Exact P(I(Theta) = 0) where the law admits it.
  std::optional<double> exact_theta() const;

  /// Finite enumeration of the spectral law, when one exists.
  std::optional<std::vector<WeightedPath>> enumerate_spectral() const;

  bool has_series() const {
    return kind_ == Kind::Iid || kind_ == Kind::MovingAverage;
  }

 private:
  SpectralModel() = default;

  Kind kind_ = Kind::Iid;
  double alpha_ = 1.0;
  std::string name_;
  bool nonnegative_ = true;
  double rho_ = 0.0;
  double pos_prob_ = 1.0;
  Index geo_forward_len_ = 0;
  FiniteSeq coeffs_;
  std::vector<WeightedPath> table_;   // ma enumeration or empirical table
  std::vector<double> table_cdf_;
};

struct TimeSeries {
  Eigen::ArrayXd values;
  std::string provenance;
  std::uint64_t seed = 0;
};

/// Stationary series whose tail process is the model's; only the iid and
/// moving-average laws carry an exact series construction.
TimeSeries simulate_series(const SpectralModel& model, Index length,
                           std::uint64_t seed);

/// Collects u^{-1} X_{t-m..t+m} over all |X_t| > u: the finite-level
/// approximation of the tail process law, used as the brute-force oracle for
/// the closed-form spectral models.  Throws if fewer than 200 exceedances.
std::vector<FiniteSeq> empirical_tail_process(const TimeSeries& series, double u,
                                              Index half_window);

}  // namespace taillab
