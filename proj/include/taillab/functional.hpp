#pragma once

#include "taillab/random.hpp"
#include "taillab/sequence.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace taillab {

/// A declarative test functional H on sequence space.
///
/// Indicator kinds describe upper events that are monotone in the radial
/// scale: {r : H(rx) = 1} = (critical_radius(x), infinity), which is what
/// makes the radial integrals against the tail measure exact per sampled
/// path.  Non-indicator kinds are plain evaluations; homogeneity degree,
/// shift invariance and an l1 Lipschitz constant are declared (and spot
/// checkable) rather than inferred.
class Functional {
 public:
  double operator()(const FiniteSeq& x) const { return eval_(x); }

  const std::string& name() const { return name_; }
  std::optional<double> degree() const { return degree_; }
  bool shift_invariant() const { return shift_invariant_; }
  std::optional<double> lipschitz_l1() const { return lipschitz_l1_; }
  bool is_indicator() const { return static_cast<bool>(critical_radius_); }

  /// inf{r > 0 : H(r x) = 1}; +infinity when the event never occurs.
  double critical_radius(const FiniteSeq& x) const { return critical_radius_(x); }

  /// For coordinate-anchored kinds, the [min, max] coordinate range H looks
  /// at; shift sums against the tail measure are exact over it.
  std::optional<std::pair<Index, Index>> coord_window() const {
    return coord_window_;
  }

  static Functional one();
  static Functional sup();
  static Functional sum();
  static Functional running_max_sum();
  static Functional sup_pow(double q);
  /// ||x||_p^q
  static Functional pnorm_pow(double p, double q);
  static Functional pospart_sum_pow(double q);
  static Functional running_max_sum_pow(double q);
  /// sum_j sign(x_j)|x_j|^a
  static Functional signed_power_sum(double a);
  static Functional count_exceed(double level);
  /// 1{max_{j in coords} v_j > level} with v_j = |x_j| or x_j per `absolute`.
  static Functional threshold(std::vector<Index> coords, double level,
                              bool absolute = true);
  /// 1{x* > level}; the shift-invariant threshold.
  static Functional sup_threshold(double level);
  /// 1{#{j : v_j > level} >= m}
  static Functional exceed_at_least(double level, int m, bool absolute = true);

  /// (base(x))_+^q with declared metadata carried over.
  static Functional pos_pow_of(const Functional& base, double q);

  struct Options {
    std::optional<double> degree;
    bool shift_invariant = false;
    std::optional<double> lipschitz_l1;
    std::function<double(const FiniteSeq&)> critical_radius;
    std::optional<std::pair<Index, Index>> coord_window;
  };
  static Functional custom(std::string name,
                           std::function<double(const FiniteSeq&)> eval,
                           Options opts);

 private:
  Functional() = default;

  std::string name_;
  std::function<double(const FiniteSeq&)> eval_;
  std::function<double(const FiniteSeq&)> critical_radius_;
  std::optional<double> degree_;
  bool shift_invariant_ = false;
  std::optional<double> lipschitz_l1_;
  std::optional<std::pair<Index, Index>> coord_window_;
};

/// Spot-checks the declared homogeneity degree and shift invariance on random
/// windows; throws std::logic_error on a violation.
void validate_functional(const Functional& h, Rng& rng, int trials = 64);

}  // namespace taillab
