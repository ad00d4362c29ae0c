#include "taillab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace taillab {

std::string FiniteSeq::to_string() const {
  std::ostringstream os;
  os << "{start=" << start_ << ", [";
  for (Index i = 0; i < values_.size(); ++i) {
    if (i) os << ", ";
    os << values_[i];
  }
  os << "]}";
  return os.str();
}

double pnorm(const FiniteSeq& x, double p) {
  if (p <= 0.0) throw std::invalid_argument("pnorm: p must be positive");
  if (x.empty()) return 0.0;
  return std::pow(x.values().abs().pow(p).sum(), 1.0 / p);
}

double supnorm(const FiniteSeq& x) {
  if (x.empty()) return 0.0;
  return x.values().abs().maxCoeff();
}

double window_max(const FiniteSeq& x, Index s, Index t) {
  if (s > t) return 0.0;
  Index a = std::max(s, x.start());
  Index b = std::min(t, x.end() - 1);
  if (a > b) return 0.0;
  return x.values().segment(a - x.start(), b - a + 1).abs().maxCoeff();
}

ArgmaxResult infargmax(const FiniteSeq& x) {
  if (x.is_zero()) return ArgmaxResult::minus_infinity();
  const auto a = x.values().abs();
  double m = a.maxCoeff();
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] == m) return ArgmaxResult::finite(x.start() + i);
  }
  return ArgmaxResult::minus_infinity();  // unreachable
}

FiniteSeq subtract(const FiniteSeq& x, const FiniteSeq& y) {
  if (x.empty()) return y.scaled(-1.0);
  if (y.empty()) return x;
  Index lo = std::min(x.start(), y.start());
  Index hi = std::max(x.end(), y.end());
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(hi - lo);
  v.segment(x.start() - lo, x.size()) += x.values();
  v.segment(y.start() - lo, y.size()) -= y.values();
  return FiniteSeq(lo, std::move(v));
}

double tilde_distance(const FiniteSeq& x, const FiniteSeq& y) {
  FiniteSeq tx = x.trimmed(), ty = y.trimmed();
  if (tx.empty()) return supnorm(ty);
  if (ty.empty()) return supnorm(tx);
  // Non-overlapping alignments all realize max(x*, y*).
  double best = std::max(supnorm(tx), supnorm(ty));
  // Overlap requires tx.start()+k <= ty.end()-1 and tx.end()-1+k >= ty.start().
  Index klo = ty.start() - (tx.end() - 1);
  Index khi = (ty.end() - 1) - tx.start();
  for (Index k = klo; k <= khi; ++k) {
    best = std::min(best, supnorm(subtract(shift(tx, k), ty)));
  }
  return best;
}

FiniteSeq canonical_anchor(const FiniteSeq& x) {
  ArgmaxResult r = infargmax(x);
  if (!r.is_finite()) {
    throw std::invalid_argument("canonical_anchor: zero sequence has no anchor");
  }
  return shift(x, -r.index);
}

}  // namespace taillab
