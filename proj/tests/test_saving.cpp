#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ifp/error.hpp"
#include "ifp/saving.hpp"

using namespace ifp;

TEST_CASE("saving_rate examples") {
  CHECK(saving_rate({2.0, 1.0, 1.0, 4.0}) == doctest::Approx(1.0 - 1.0 / 4.0).epsilon(1e-15));
  CHECK(saving_rate({2.0, 2.0, 1.0, 0.5}) == doctest::Approx(1.0 - 2.0 / 0.5).epsilon(1e-15));
  CHECK(saving_rate({2.0, 1.0, 1.1, 1.0}) == doctest::Approx(1.0 - 0.5 / 0.55).epsilon(1e-14));
  CHECK(saving_rate({3.0, 3.0, 1.3, 3.0}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("asymptotic_saving_rate examples") {
  CHECK(asymptotic_saving_rate(0.0, 1.05).value == 1.0);
  CHECK(asymptotic_saving_rate(0.03, 1.02).value == doctest::Approx(1.0 - 0.03 / (0.02 * 0.97)).epsilon(1e-14));
  CHECK(asymptotic_saving_rate(0.03, 1.02).value == doctest::Approx(-0.546).epsilon(1e-3));
  const AsymptoticSavingRate neg = asymptotic_saving_rate(0.02, 0.97);
  CHECK(std::isinf(neg.value));
  CHECK(neg.value < 0.0);
  const AsymptoticSavingRate ind = asymptotic_saving_rate(0.0, 1.0);
  CHECK(ind.indeterminate);
  CHECK(std::isnan(ind.value));
}

TEST_CASE("bewley_check examples") {
  const BewleyReport r = bewley_check(0.96, 1.02, 2.0);
  CHECK(r.c_bar == doctest::Approx(0.029858).epsilon(1e-6));
  CHECK(r.s_bar == doctest::Approx(1.0 - r.c_bar / (0.02 * (1.0 - r.c_bar))).epsilon(1e-14));
  CHECK(r.s_bar == doctest::Approx(-0.539).epsilon(1e-3));
  CHECK(r.s_bar_negative);

  const BewleyReport low = bewley_check(0.96, 0.99, 2.0);
  CHECK(std::isinf(low.s_bar));
  CHECK(low.s_bar_negative);

  CHECK_THROWS_AS(bewley_check(0.99, 1.02, 2.0), PreconditionViolation);
}

TEST_CASE("bewley_check_iid at the stationarity boundary") {
  // E R (1 - c_bar) = 1 with gamma = 2 pins beta = (1 - c_bar)^2 / E[1/R].
  const std::vector<ReturnAtom> returns{{0.5, 1.3}, {0.5, 0.9}};
  const double mean = 1.1, c_bar = 1.0 - 1.0 / mean;
  const double inv_mean = 0.5 / 1.3 + 0.5 / 0.9;
  const double beta = (1.0 - c_bar) * (1.0 - c_bar) / inv_mean;
  const BewleyIidReport r = bewley_check_iid(beta, returns, 2.0);
  CHECK(r.c_bar == doctest::Approx(c_bar).epsilon(1e-14));
  CHECK(r.stationarity_lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.s_bar) < 1e-9);
  CHECK(r.s_bar_nonpositive);

  const std::vector<ReturnAtom> wide_pair{{0.5, 1.2}, {0.5, 0.6}};
  const BewleyIidReport low = bewley_check_iid(0.7, wide_pair, 2.0);
  CHECK(low.mean_return == doctest::Approx(0.9));
  CHECK(std::isinf(low.s_bar));
  CHECK(low.s_bar_nonpositive);

  CHECK_THROWS_AS(bewley_check_iid(beta * 1.05, returns, 2.0), PreconditionViolation);
  CHECK_THROWS_AS(bewley_check_iid(0.9, std::vector<ReturnAtom>{{0.5, 1.0}}, 2.0), PreconditionViolation);
}

TEST_CASE("property: the two saving rate forms agree") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = std::exp(10.0 * u(rng) - 3.0);
    const double c = a * (0.001 + 0.999 * u(rng));
    const double R = 2.0 * u(rng);
    const double Y = 0.01 + 5.0 * u(rng);
    const SavingRateInputs in{a, c, R, Y};
    const double s = saving_rate(in);
    CHECK(s == doctest::Approx(saving_rate_from_levels(in)).epsilon(1e-12));
    CHECK(s < 1.0);
  }
}

TEST_CASE("property: saving rate approaches its asymptotic value") {
  const double c_bar = 0.03, R = 1.02, Y = 1.0;
  const double limit = asymptotic_saving_rate(c_bar, R).value;
  double previous = 1e300;
  for (double a : {1e3, 1e4, 1e5, 1e6}) {
    const double gap = std::abs(saving_rate({a, c_bar * a + std::log(a), R, Y}) - limit);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("property: constant-return Bewley economies dissave at the top") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double R = 0.9 + 0.2 * u(rng);
    const double beta = (0.5 + 0.5 * u(rng)) / R * (1.0 - 1e-6);
    const double gamma = 0.2 + 8.0 * u(rng);
    const BewleyReport r = bewley_check(beta, R, gamma);
    CHECK(r.s_bar < 0.0);
    CHECK(r.s_bar_negative);
  }
}
