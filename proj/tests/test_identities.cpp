#include "taillab/identities.hpp"

#include "taillab/suites.hpp"

#include <doctest.h>

#include <cmath>

using namespace taillab;

namespace {

const unsigned kLanes = 4;

SpectralModel ma15(double p = 1.0) {
  return SpectralModel::moving_average(1.5, FiniteSeq(0, {1.0, 0.5}), p);
}

// Backward-depth enumeration of E[log ||Theta||_1] for the geometric law:
// ||Theta||_1 given depth N is rho^{-N}/(1-rho).
double geometric_log_l1_enumeration(double rho, double alpha) {
  double total = 0.0;
  double theta = 1.0 - std::pow(rho, alpha);
  for (int m = 0; m <= 60; ++m) {
    double p = std::pow(rho, alpha * m) * theta;
    total += p * std::log(std::pow(rho, -m) / (1.0 - rho));
  }
  return total;
}

}  // namespace

TEST_CASE("extremal index hexagon is exact on the spike law") {
  auto rep = theta_candidate_hexagon(SpectralModel::iid(1.5), 5'000, kLanes, 1);
  CHECK(rep.pass);
  CHECK(rep.max_sigmas == 0.0);
  for (const auto& side : rep.sides) CHECK(side.est.value == 1.0);
}

TEST_CASE("extremal index hexagon on geometric and moving-average laws") {
  auto geo = theta_candidate_hexagon(SpectralModel::geometric(1.0, 0.5),
                                     100'000, kLanes, 2);
  CHECK(geo.pass);
  CHECK(geo.sides[0].label == "exact");
  CHECK(geo.sides[0].est.value == doctest::Approx(0.5));

  auto ma = theta_candidate_hexagon(ma15(), 100'000, kLanes, 3);
  CHECK(ma.pass);
  CHECK(ma.sides[0].est.value ==
        doctest::Approx(1.0 / (1.0 + std::pow(0.5, 1.5))).epsilon(1e-12));
}

TEST_CASE("signs do not move the candidate extremal index") {
  auto signed_ma = theta_candidate_hexagon(ma15(0.7), 50'000, kLanes, 4);
  CHECK(signed_ma.pass);
  CHECK(signed_ma.sides[0].est.value ==
        doctest::Approx(1.0 / (1.0 + std::pow(0.5, 1.5))).epsilon(1e-12));
}

TEST_CASE("candidate extremal index is positive and decreasing in rho") {
  double last = 1.1;
  for (double rho : {0.2, 0.5, 0.8}) {
    auto est = theta_candidate(SpectralModel::geometric(1.3, rho),
                               ThetaMethod::InfargmaxProb, 50'000, kLanes, 5);
    CHECK(est.value - 3.0 * est.stderr_ > 0.0);
    CHECK(est.value < last - 0.05);
    last = est.value;
  }
}

TEST_CASE("Q against conditioned spectral law, constant functional") {
  for (const auto& model :
       {SpectralModel::iid(0.7), ma15(), SpectralModel::geometric(1.0, 0.5)}) {
    auto rep = check_Q_theta_identity(Functional::one(), model, 50'000, kLanes, 6);
    CHECK(rep.sides.size() == 2);
    CHECK(rep.pass);
  }
}

TEST_CASE("Q identity three ways for homogeneous functionals") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  auto rep = check_Q_theta_identity(Functional::sup_pow(1.0), geo, 100'000,
                                    kLanes, 7);
  REQUIRE(rep.sides.size() == 3);
  CHECK(rep.pass);
  for (const auto& s : rep.sides) {
    CHECK(std::abs(s.est.value - 0.5) <= 3.0 * std::max(s.est.stderr_, 1e-9));
  }

  auto iid = SpectralModel::iid(1.5);
  auto rep2 = check_Q_theta_identity(Functional::pnorm_pow(1.5, 1.5), iid,
                                     5'000, kLanes, 8);
  REQUIRE(rep2.sides.size() == 3);
  for (const auto& s : rep2.sides) CHECK(s.est.value == doctest::Approx(1.0));
  CHECK(rep2.pass);

  CHECK_THROWS_AS(check_Q_theta_identity(
                      Functional::threshold({0}, 1.0), iid, 100, kLanes, 9),
                  std::invalid_argument);
}

TEST_CASE("Q alpha-moment sum is one across laws and indices") {
  for (double alpha : {0.7, 1.0, 1.5, 2.3}) {
    for (const auto& model :
         {SpectralModel::iid(alpha), SpectralModel::geometric(alpha, 0.5),
          SpectralModel::moving_average(alpha, FiniteSeq(0, {1.0, 0.5}))}) {
      auto rep = qsum_alpha_identity(model, 50'000, kLanes, 10);
      CHECK(rep.pass);
      CHECK(std::abs(rep.sides[0].est.value - 1.0) <=
            3.0 * std::max(rep.sides[0].est.stderr_, 1e-9));
    }
  }
}

TEST_CASE("l1 moment identity closed form at alpha one") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  auto rep = qsum_alpha_identity(geo, 100'000, kLanes, 11);
  REQUIRE(rep.sides.size() == 4);
  // theta E[||Q||_1] = 0.5 * 2 = 1 and E[||Theta||_1^0] = 1.
  CHECK(std::abs(rep.sides[2].est.value - 1.0) <=
        3.0 * std::max(rep.sides[2].est.stderr_, 1e-9));
  CHECK(rep.sides[3].est.value == doctest::Approx(1.0));
  CHECK(rep.pass);
}

TEST_CASE("forward identity reproduces the telescoping extremal index") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  auto rep = check_forward_identity(Functional::sup_pow(1.0), geo, 100'000,
                                    kLanes, 12);
  CHECK(rep.pass);
  for (const auto& s : rep.sides) {
    CHECK(std::abs(s.est.value - 0.5) <= 3.0 * std::max(s.est.stderr_, 1e-9));
  }
}

TEST_CASE("forward identity for the signed power sum hits the tail skewness") {
  auto rep = check_forward_identity(Functional::signed_power_sum(1.5), ma15(),
                                    50'000, kLanes, 13);
  CHECK(rep.pass);
  CHECK(rep.sides[1].est.value == doctest::Approx(1.0));  // E[Theta_0] = 1
  CHECK(rep.sides[1].est.stderr_ == doctest::Approx(0.0));
  CHECK(std::abs(rep.sides[0].est.value - 1.0) <=
        3.0 * std::max(rep.sides[0].est.stderr_, 1e-9));

  // Two-sided innovations tilt the skewness to 2p - 1.
  auto skew = check_forward_identity(Functional::signed_power_sum(1.5),
                                     ma15(0.7), 50'000, kLanes, 14);
  CHECK(skew.pass);
  CHECK(skew.sides[1].est.value == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("forward identity for partial-sum functionals") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  for (const auto& base : {Functional::sum(), Functional::running_max_sum()}) {
    auto rep = check_forward_identity(Functional::pos_pow_of(base, 1.0), geo,
                                      100'000, kLanes, 15);
    CHECK(rep.pass);
  }
  CHECK_THROWS_AS(
      check_forward_identity(Functional::sup_pow(2.0), geo, 100, kLanes, 16),
      std::invalid_argument);
}

TEST_CASE("log identities vanish on the spike law") {
  auto rep = log_identities_alpha1(SpectralModel::iid(1.0), 5'000, kLanes, 17);
  CHECK(rep.pass);
  for (const auto& s : rep.sides) {
    CHECK(s.est.value == doctest::Approx(0.0));
    CHECK(s.est.stderr_ == doctest::Approx(0.0));
  }
}

TEST_CASE("log identities on the geometric law against enumeration") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  auto rep = log_identities_alpha1(geo, 200'000, kLanes, 18);
  CHECK(rep.pass);
  double oracle = geometric_log_l1_enumeration(0.5, 1.0);
  CHECK(oracle == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(rep.sides[1].est.value - oracle) <=
        3.0 * std::max(rep.sides[1].est.stderr_, 1e-9));
  // Forward S log S difference is 2 log 2 exactly, path by path.
  CHECK(rep.sides[3].est.value == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(rep.sides[3].est.stderr_ == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(log_identities_alpha1(SpectralModel::iid(1.5), 100, kLanes, 19),
                  std::invalid_argument);
}

TEST_CASE("sum-log difference bound holds on random pairs") {
  Rng rng = lane_rng(20, 0);
  auto g = [](double s) { return s == 0.0 ? 0.0 : s * std::log(std::abs(s)); };
  for (int trial = 0; trial < 10'000; ++trial) {
    Index len = 1 + static_cast<Index>(rng() % 6);
    Eigen::ArrayXd xv(len), yv(len);
    for (Index i = 0; i < len; ++i) {
      xv[i] = 6.0 * uniform01(rng) - 3.0;
      yv[i] = xv[i] + (2.0 * uniform01(rng) - 1.0) / static_cast<double>(len);
    }
    FiniteSeq x(0, xv), y(0, yv);
    double sx = xv.sum(), sy = yv.sum();
    if (std::abs(sx - sy) > 1.0) continue;
    double lhs = std::abs(g(sx) - g(sy));
    double l1 = std::max(pnorm(x, 1.0), pnorm(y, 1.0));
    double rhs = 2.0 + std::max(0.0, std::log(l1));
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("maximum of the conditioned tail process stays Pareto") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  Rng rng = lane_rng(21, 0);
  std::size_t n = 20'000;
  std::vector<double> ystar;
  while (ystar.size() < n) {
    FiniteSeq theta = geo.sample_spectral(rng);
    double r = pareto(rng, 1.0);
    FiniteSeq y = theta.scaled(r);
    if (window_max(y, kNegInfIndex, -1) <= 1.0) ystar.push_back(supnorm(y));
  }
  double d = ks_statistic(std::move(ystar), [](double v) {
    return v < 1.0 ? 0.0 : 1.0 - 1.0 / v;
  });
  CHECK(d <= ks_critical(n));
}

TEST_CASE("cluster index curve is exact on the spike law") {
  auto curve = cluster_index(Functional::sum(), SpectralModel::iid(1.5), 12,
                             2'000, kLanes, 22);
  for (const auto& p : curve.points) {
    CHECK(p.b_k.value == doctest::Approx(static_cast<double>(p.k)));
    CHECK(p.b_k.stderr_ == doctest::Approx(0.0));
    CHECK(p.diff.value == doctest::Approx(1.0));
  }
  CHECK(curve.pass);
  CHECK(curve.limit.value == doctest::Approx(1.0));
}

TEST_CASE("cluster index slope meets the Q-side limit") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  auto curve = cluster_index(Functional::sum(), geo, 30, 50'000, kLanes, 23);
  CHECK(curve.pass);
  CHECK(std::abs(curve.cesaro.value - 1.0) <=
        3.0 * std::max(curve.cesaro.stderr_, 1e-9));
  CHECK(std::abs(curve.limit.value - 1.0) <=
        3.0 * std::max(curve.limit.stderr_, 1e-9));

  auto ruin = cluster_index(Functional::running_max_sum(), geo, 30, 50'000,
                            kLanes, 24);
  CHECK(ruin.pass);

  CHECK_THROWS_AS(cluster_index(Functional::sup_pow(1.0), geo, 5, 100, kLanes, 25),
                  std::invalid_argument);
}
