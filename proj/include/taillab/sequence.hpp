#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace taillab {

using Index = std::int64_t;

constexpr Index kNegInfIndex = std::numeric_limits<Index>::min();
constexpr Index kPosInfIndex = std::numeric_limits<Index>::max();

/// A doubly-finite window of real values indexed by integers, implicitly
/// zero outside the window.  Immutable after construction.
class FiniteSeq {
 public:
  FiniteSeq() : start_(0) {}

  FiniteSeq(Index start, Eigen::ArrayXd values)
      : start_(start), values_(std::move(values)) {}

  FiniteSeq(Index start, std::initializer_list<double> values)
      : start_(start), values_(Eigen::Map<const Eigen::ArrayXd>(
                           values.begin(), static_cast<Index>(values.size()))) {}

  static FiniteSeq zero() { return FiniteSeq(); }

  static FiniteSeq spike(Index pos, double value) {
    Eigen::ArrayXd v(1);
    v[0] = value;
    return FiniteSeq(pos, std::move(v));
  }

  Index start() const { return start_; }
  Index size() const { return values_.size(); }
  // One past the last stored index; equals start() for an empty window.
  Index end() const { return start_ + values_.size(); }
  bool empty() const { return values_.size() == 0; }
  const Eigen::ArrayXd& values() const { return values_; }

  double operator[](Index i) const {
    if (i < start_ || i >= end()) return 0.0;
    return values_[i - start_];
  }

  bool is_zero() const { return empty() || (values_ == 0.0).all(); }

  /// Drops leading and trailing exact zeros; the result is equal as a sequence.
  FiniteSeq trimmed() const {
    Index lo = 0, hi = values_.size();
    while (lo < hi && values_[lo] == 0.0) ++lo;
    while (hi > lo && values_[hi - 1] == 0.0) --hi;
    if (lo == hi) return FiniteSeq();
    return FiniteSeq(start_ + lo, values_.segment(lo, hi - lo).eval());
  }

  /// Restriction to the index window [lo, hi], zeros elsewhere.
  FiniteSeq restrict(Index lo, Index hi) const {
    if (empty() || lo > hi) return FiniteSeq();
    Index a = std::max(lo, start_);
    Index b = std::min(hi, end() - 1);
    if (a > b) return FiniteSeq();
    return FiniteSeq(a, values_.segment(a - start_, b - a + 1).eval());
  }

  FiniteSeq scaled(double c) const { return FiniteSeq(start_, (c * values_).eval()); }

  // Exact where scaled(1/c) would round the reciprocal.
  FiniteSeq divided_by(double c) const {
    return FiniteSeq(start_, (values_ / c).eval());
  }

  friend bool operator==(const FiniteSeq& a, const FiniteSeq& b) {
    FiniteSeq ta = a.trimmed(), tb = b.trimmed();
    return ta.start_ == tb.start_ && ta.values_.size() == tb.values_.size() &&
           (ta.values_ == tb.values_).all();
  }

  std::string to_string() const;

 private:
  Index start_;
  Eigen::ArrayXd values_;
};

/// First index attaining the supremum modulus, or an infinite tag when no
/// first attainment exists (the zero sequence yields MinusInfinity).
struct ArgmaxResult {
  enum class Kind { Finite, MinusInfinity, PlusInfinity };
  Kind kind = Kind::MinusInfinity;
  Index index = 0;

  static ArgmaxResult finite(Index j) { return {Kind::Finite, j}; }
  static ArgmaxResult minus_infinity() { return {Kind::MinusInfinity, 0}; }
  static ArgmaxResult plus_infinity() { return {Kind::PlusInfinity, 0}; }

  bool is_finite() const { return kind == Kind::Finite; }
  friend bool operator==(const ArgmaxResult& a, const ArgmaxResult& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.index == b.index);
  }
};

/// (shift(x,k))_j = x_{j-k}; the k-th backshift iterate.
inline FiniteSeq shift(const FiniteSeq& x, Index k) {
  return FiniteSeq(x.start() + k, x.values());
}

double pnorm(const FiniteSeq& x, double p);
double supnorm(const FiniteSeq& x);

/// max_{s <= j <= t} |x_j| over the clamped window; 0 on an empty range.
double window_max(const FiniteSeq& x, Index s, Index t);

ArgmaxResult infargmax(const FiniteSeq& x);

/// Pointwise difference, windows aligned.
FiniteSeq subtract(const FiniteSeq& x, const FiniteSeq& y);

/// Metric on shift-equivalence classes: min over relative shifts k of
/// sup_j |shift(x,k)_j - y_j|, the non-overlapping alignment included.
double tilde_distance(const FiniteSeq& x, const FiniteSeq& y);

/// Shifts x so that its infargmax sits at index 0.  Rejects the zero sequence.
FiniteSeq canonical_anchor(const FiniteSeq& x);

}  // namespace taillab
