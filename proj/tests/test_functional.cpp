#include "taillab/functional.hpp"

#include <doctest.h>

#include <cmath>

using namespace taillab;

TEST_CASE("declared metadata survives spot checks") {
  Rng rng = lane_rng(42, 0);
  for (const auto& h :
       {Functional::one(), Functional::sup(), Functional::sum(),
        Functional::running_max_sum(), Functional::sup_pow(1.5),
        Functional::pnorm_pow(1.0, 1.5), Functional::pospart_sum_pow(2.0),
        Functional::running_max_sum_pow(0.7), Functional::signed_power_sum(1.5),
        Functional::count_exceed(1.0), Functional::sup_threshold(2.0),
        Functional::exceed_at_least(1.0, 2),
        Functional::pos_pow_of(Functional::sum(), 1.5)}) {
    CHECK_NOTHROW(validate_functional(h, rng));
  }
}

TEST_CASE("validation catches a lying declaration") {
  Rng rng = lane_rng(43, 0);
  auto bad_degree = Functional::custom(
      "bad_degree", [](const FiniteSeq& x) { return supnorm(x) + 1.0; },
      {.degree = 1.0});
  CHECK_THROWS_AS(validate_functional(bad_degree, rng), std::logic_error);
  auto bad_shift = Functional::custom(
      "bad_shift", [](const FiniteSeq& x) { return x[0]; },
      {.shift_invariant = true});
  CHECK_THROWS_AS(validate_functional(bad_shift, rng), std::logic_error);
}

TEST_CASE("indicator critical radii") {
  FiniteSeq x(0, {1.0, 0.5});
  auto sup1 = Functional::sup_threshold(1.0);
  CHECK(sup1.critical_radius(x) == doctest::Approx(1.0));
  CHECK(sup1(x.scaled(1.01)) == 1.0);
  CHECK(sup1(x.scaled(0.99)) == 0.0);

  auto two = Functional::exceed_at_least(1.0, 2);
  CHECK(two.critical_radius(x) == doctest::Approx(2.0));
  CHECK(two(x.scaled(2.5)) == 1.0);
  CHECK(two(x.scaled(1.5)) == 0.0);
  CHECK(two.critical_radius(FiniteSeq::spike(0, 1.0)) ==
        std::numeric_limits<double>::infinity());

  auto coord = Functional::threshold({1}, 2.0, false);
  CHECK(coord.critical_radius(x) == doctest::Approx(4.0));
  CHECK(coord.critical_radius(FiniteSeq(0, {1.0, -0.5})) ==
        std::numeric_limits<double>::infinity());
  CHECK(coord.coord_window().has_value());
}

TEST_CASE("signed power sum matches the odd power") {
  auto h = Functional::signed_power_sum(1.5);
  FiniteSeq x(0, {4.0, -1.0});
  CHECK(h(x) == doctest::Approx(std::pow(4.0, 1.5) - 1.0));
}

TEST_CASE("running max of partial sums includes the empty prefix") {
  auto h = Functional::running_max_sum();
  CHECK(h(FiniteSeq(0, {-1.0, -2.0})) == 0.0);
  CHECK(h(FiniteSeq(0, {1.0, -3.0, 2.5})) == doctest::Approx(1.0));
  CHECK(h(FiniteSeq(0, {1.0, 2.0})) == doctest::Approx(3.0));
}
