#include "taillab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace taillab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mth_largest(std::vector<double> v, int m) {
  if (static_cast<int>(v.size()) < m) return 0.0;
  std::nth_element(v.begin(), v.begin() + (m - 1), v.end(), std::greater<>());
  return v[m - 1];
}

double running_max_of_partial_sums(const FiniteSeq& x) {
  // sup over k in Z of sum_{j<=k} x_j; prefixes left of the window are all
  // zero, so the sup is never below 0.
  double s = 0.0, best = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    s += x.values()[i];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Functional Functional::custom(std::string name,
                              std::function<double(const FiniteSeq&)> eval,
                              Options opts) {
  Functional f;
  f.name_ = std::move(name);
  f.eval_ = std::move(eval);
  f.degree_ = opts.degree;
  f.shift_invariant_ = opts.shift_invariant;
  f.lipschitz_l1_ = opts.lipschitz_l1;
  f.critical_radius_ = std::move(opts.critical_radius);
  f.coord_window_ = opts.coord_window;
  return f;
}

Functional Functional::one() {
  return custom("one", [](const FiniteSeq&) { return 1.0; },
                {.degree = 0.0, .shift_invariant = true});
}

Functional Functional::sup() {
  return custom("sup", [](const FiniteSeq& x) { return supnorm(x); },
                {.degree = 1.0, .shift_invariant = true, .lipschitz_l1 = 1.0});
}

Functional Functional::sum() {
  return custom("sum",
                [](const FiniteSeq& x) { return x.empty() ? 0.0 : x.values().sum(); },
                {.degree = 1.0, .shift_invariant = true, .lipschitz_l1 = 1.0});
}

Functional Functional::running_max_sum() {
  return custom("running_max_sum", &running_max_of_partial_sums,
                {.degree = 1.0, .shift_invariant = true, .lipschitz_l1 = 1.0});
}

Functional Functional::sup_pow(double q) {
  std::ostringstream n;
  n << "sup^" << q;
  return custom(n.str(),
                [q](const FiniteSeq& x) { return std::pow(supnorm(x), q); },
                {.degree = q, .shift_invariant = true});
}

Functional Functional::pnorm_pow(double p, double q) {
  std::ostringstream n;
  n << "l" << p << "norm^" << q;
  return custom(n.str(),
                [p, q](const FiniteSeq& x) { return std::pow(pnorm(x, p), q); },
                {.degree = q, .shift_invariant = true,
                 .lipschitz_l1 = (p == 1.0 && q == 1.0)
                     ? std::optional<double>(1.0)
                     : std::nullopt});
}

Functional Functional::pospart_sum_pow(double q) {
  std::ostringstream n;
  n << "pospart_sum^" << q;
  return custom(n.str(),
                [q](const FiniteSeq& x) {
                  double s = x.empty() ? 0.0 : x.values().sum();
                  return s > 0.0 ? std::pow(s, q) : 0.0;
                },
                {.degree = q, .shift_invariant = true});
}

Functional Functional::running_max_sum_pow(double q) {
  std::ostringstream n;
  n << "running_max_sum^" << q;
  return custom(n.str(),
                [q](const FiniteSeq& x) {
                  double s = running_max_of_partial_sums(x);
                  return s > 0.0 ? std::pow(s, q) : 0.0;
                },
                {.degree = q, .shift_invariant = true});
}

Functional Functional::signed_power_sum(double a) {
  std::ostringstream n;
  n << "signed_power_sum^" << a;
  return custom(n.str(),
                [a](const FiniteSeq& x) {
                  double s = 0.0;
                  for (Index i = 0; i < x.size(); ++i) {
                    double v = x.values()[i];
                    s += v >= 0.0 ? std::pow(v, a) : -std::pow(-v, a);
                  }
                  return s;
                },
                {.degree = a, .shift_invariant = true});
}

Functional Functional::count_exceed(double level) {
  std::ostringstream n;
  n << "count_exceed(" << level << ")";
  return custom(n.str(),
                [level](const FiniteSeq& x) {
                  if (x.empty()) return 0.0;
                  return static_cast<double>((x.values().abs() > level).count());
                },
                {.shift_invariant = true});
}

Functional Functional::threshold(std::vector<Index> coords, double level,
                                 bool absolute) {
  std::ostringstream n;
  n << "ind{" << (absolute ? "|x_j|" : "x_j") << ">" << level << ", j in {";
  for (std::size_t i = 0; i < coords.size(); ++i) n << (i ? "," : "") << coords[i];
  n << "}}";
  auto peak = [coords, absolute](const FiniteSeq& x) {
    double m = 0.0;
    for (Index j : coords) {
      double v = absolute ? std::abs(x[j]) : x[j];
      m = std::max(m, v);
    }
    return m;
  };
  auto [lo, hi] = std::minmax_element(coords.begin(), coords.end());
  std::pair<Index, Index> window{*lo, *hi};
  return custom(n.str(),
                [peak, level](const FiniteSeq& x) { return peak(x) > level ? 1.0 : 0.0; },
                {.degree = std::nullopt, .shift_invariant = false,
                 .critical_radius = [peak, level](const FiniteSeq& x) {
                   double m = peak(x);
                   return m > 0.0 ? level / m : kInf;
                 },
                 .coord_window = window});
}

Functional Functional::sup_threshold(double level) {
  std::ostringstream n;
  n << "ind{sup>" << level << "}";
  return custom(n.str(),
                [level](const FiniteSeq& x) { return supnorm(x) > level ? 1.0 : 0.0; },
                {.degree = std::nullopt, .shift_invariant = true,
                 .critical_radius = [level](const FiniteSeq& x) {
                   double m = supnorm(x);
                   return m > 0.0 ? level / m : kInf;
                 }});
}

Functional Functional::exceed_at_least(double level, int m, bool absolute) {
  std::ostringstream n;
  n << "ind{count(" << (absolute ? "|x_j|" : "x_j") << ">" << level << ")>=" << m
    << "}";
  auto values = [absolute](const FiniteSeq& x) {
    std::vector<double> v;
    v.reserve(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      double a = x.values()[i];
      v.push_back(absolute ? std::abs(a) : a);
    }
    return v;
  };
  return custom(n.str(),
                [values, level, m](const FiniteSeq& x) {
                  auto v = values(x);
                  int c = static_cast<int>(
                      std::count_if(v.begin(), v.end(),
                                    [level](double a) { return a > level; }));
                  return c >= m ? 1.0 : 0.0;
                },
                {.degree = std::nullopt, .shift_invariant = true,
                 .critical_radius = [values, level, m](const FiniteSeq& x) {
                   double kth = mth_largest(values(x), m);
                   return kth > 0.0 ? level / kth : kInf;
                 }});
}

Functional Functional::pos_pow_of(const Functional& base, double q) {
  std::ostringstream n;
  n << "(" << base.name() << ")_+^" << q;
  std::optional<double> deg;
  if (base.degree()) deg = *base.degree() * q;
  return custom(n.str(),
                [base, q](const FiniteSeq& x) {
                  double v = base(x);
                  return v > 0.0 ? std::pow(v, q) : 0.0;
                },
                {.degree = deg, .shift_invariant = base.shift_invariant()});
}

void validate_functional(const Functional& h, Rng& rng, int trials) {
  for (int t = 0; t < trials; ++t) {
    Index len = 1 + static_cast<Index>(rng() % 6);
    Index start = static_cast<Index>(rng() % 7) - 3;
    Eigen::ArrayXd v(len);
    for (Index i = 0; i < len; ++i) v[i] = 4.0 * uniform01(rng) - 2.0;
    FiniteSeq x(start, v);
    double hx = h(x);
    if (std::isnan(hx)) throw std::logic_error(h.name() + ": NaN on random input");
    if (h.degree()) {
      double c = 0.25 + 4.0 * uniform01(rng);
      double lhs = h(x.scaled(c));
      double rhs = std::pow(c, *h.degree()) * hx;
      double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (std::abs(lhs - rhs) > 1e-9 * scale) {
        throw std::logic_error(h.name() + ": declared homogeneity violated");
      }
    }
    if (h.shift_invariant()) {
      Index k = static_cast<Index>(rng() % 9) - 4;
      if (h(shift(x, k)) != hx) {
        throw std::logic_error(h.name() + ": declared shift invariance violated");
      }
    }
  }
}

}  // namespace taillab
