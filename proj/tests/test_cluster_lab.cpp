#include "taillab/cluster_lab.hpp"

#include <doctest.h>

#include <cmath>

using namespace taillab;

namespace {

const unsigned kLanes = 4;

SpectralModel ma15() {
  return SpectralModel::moving_average(1.5, FiniteSeq(0, {1.0, 0.5}));
}

}  // namespace

TEST_CASE("default blocking scheme is sane") {
  TimeSeries ts = simulate_series(ma15(), 400'000, 51);
  auto scheme = make_blocking_scheme(ts);
  CHECK(scheme.k_n >= 50);
  CHECK(scheme.monitor < 0.05);
  CHECK(scheme.marginal_exceed_prob > 0.0);
  CHECK(scheme.r_n == static_cast<Index>(std::pow(400'000.0, 0.35)));
}

TEST_CASE("blocks are anchored representatives") {
  TimeSeries ts = simulate_series(ma15(), 200'000, 52);
  auto scheme = make_blocking_scheme(ts);
  auto blocks = extract_blocks(ts, scheme, 1.0 / scheme.c_n);
  CHECK(static_cast<Index>(blocks.size()) == scheme.k_n);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& b = blocks[i];
    if (b.canonical.is_zero()) continue;
    CHECK(infargmax(b.canonical) == ArgmaxResult::finite(0));
    CHECK(canonical_anchor(b.canonical) == b.canonical);
  }
}

TEST_CASE("empirical cluster measure of the sup threshold") {
  // iid series: the candidate extremal index is 1.
  TimeSeries iid_ts = simulate_series(SpectralModel::iid(1.5), 1'000'000, 53);
  auto iid_scheme = make_blocking_scheme(iid_ts);
  auto est = empirical_cluster_measure(iid_ts, iid_scheme,
                                       Functional::sup_threshold(1.0));
  CHECK(std::abs(est.value - 1.0) <= 3.0 * est.stderr_ + 0.03);

  TimeSeries ts = simulate_series(ma15(), 1'000'000, 54);
  auto scheme = make_blocking_scheme(ts);
  double theta = 1.0 / (1.0 + std::pow(0.5, 1.5));
  auto est_ma =
      empirical_cluster_measure(ts, scheme, Functional::sup_threshold(1.0));
  CHECK(std::abs(est_ma.value - theta) <= 3.0 * est_ma.stderr_ + 0.03);

  CHECK_THROWS_AS(
      empirical_cluster_measure(ts, scheme, Functional::threshold({0}, 1.0)),
      std::invalid_argument);
}

TEST_CASE("block bootstrap stderr is deterministic per seed") {
  TimeSeries ts = simulate_series(ma15(), 200'000, 55);
  auto scheme = make_blocking_scheme(ts);
  auto a = empirical_cluster_measure(ts, scheme, Functional::sup_threshold(1.0), 99);
  auto b = empirical_cluster_measure(ts, scheme, Functional::sup_threshold(1.0), 99);
  CHECK(a.value == b.value);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("limiting cluster measure evaluated two ways") {
  auto geo = SpectralModel::geometric(1.0, 0.5);
  for (double u : {1.0, 2.0}) {
    auto res = nu_star(Functional::sup_threshold(u), geo, 100'000, kLanes, 56);
    CHECK(res.pass);
    CHECK(std::abs(res.q_anchored.value - 0.5 / u) <=
          3.0 * std::max(res.q_anchored.stderr_, 1e-9));
  }
}

TEST_CASE("two-exceedance cluster mass") {
  auto h = Functional::exceed_at_least(1.0, 2);
  auto iid = nu_star(h, SpectralModel::iid(1.0), 5'000, kLanes, 57);
  CHECK(iid.q_anchored.value == 0.0);
  CHECK(iid.infargmax_anchored.value == 0.0);

  // Geometric law: two coordinates of r Q exceed 1 once r > 1/rho, and the
  // no-backward-exceedance conditioning forces the forward path, so the mass
  // is theta * rho^alpha = 0.25.
  auto geo = nu_star(h, SpectralModel::geometric(1.0, 0.5), 100'000, kLanes, 58);
  CHECK(geo.pass);
  CHECK(std::abs(geo.q_anchored.value - 0.25) <=
        3.0 * std::max(geo.q_anchored.stderr_, 1e-9));
}

TEST_CASE("normalized cluster law matches the Q law") {
  TimeSeries ts = simulate_series(ma15(), 1'000'000, 59);
  auto scheme = make_blocking_scheme(ts);
  std::vector<Functional> probes = {Functional::custom(
      "coord1_in_(0.4,0.6)",
      [](const FiniteSeq& q) {
        double v = std::abs(q[infargmax(q).index + 1]);
        return v > 0.4 && v < 0.6 ? 1.0 : 0.0;
      },
      {.shift_invariant = true})};
  auto rep = normalized_cluster_law(ts, scheme, 1.0, probes, ma15(), 50'000,
                                    kLanes, 60);
  CHECK(rep.pass);

  // The conditional law of block*/c_n above the threshold is Pareto, so the
  // radial sides sit near v^{-alpha}.
  bool found_radial = false;
  for (const auto& s : rep.sides) {
    if (s.label.rfind("radial_emp", 0) == 0) found_radial = true;
  }
  CHECK(found_radial);

  CHECK_THROWS_AS(normalized_cluster_law(ts, scheme, 50.0, probes, ma15(), 1'000,
                                         kLanes, 61),
                  std::runtime_error);
}

TEST_CASE("anticlustering diagnostic decays past the dependence range") {
  // Independent coordinates leave only the in-block multiplicity floor,
  // roughly two exceedance windows of r_n coordinates each.
  TimeSeries iid_ts = simulate_series(SpectralModel::iid(1.5), 600'000, 62);
  auto iid_scheme = make_blocking_scheme(iid_ts);
  double iid_floor = 2.0 * iid_scheme.monitor;
  auto iid_curve = anticlustering_diagnostic(iid_ts, iid_scheme, {1, 2, 4}, 1.0);
  for (const auto& p : iid_curve) {
    CHECK(std::abs(p.est.value - iid_floor) <= 3.0 * p.est.stderr_ + 0.02);
  }

  TimeSeries ts = simulate_series(ma15(), 600'000, 63);
  auto scheme = make_blocking_scheme(ts);
  auto curve = anticlustering_diagnostic(ts, scheme, {1, 2, 4, 8}, 1.0);
  // Lag-1 dependence shows, then drops to the independence floor.
  CHECK(curve[0].est.value > 0.2);
  CHECK(curve[1].est.value < 2.0 * scheme.monitor + 3.0 * curve[1].est.stderr_ + 0.02);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].est.value <=
          curve[i - 1].est.value +
              3.0 * std::hypot(curve[i].est.stderr_, curve[i - 1].est.stderr_));
  }
}
