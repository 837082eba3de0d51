#include <doctest.h>

#include <cmath>
#include <random>

#include "ifp/calibration.hpp"
#include "ifp/error.hpp"
#include "ifp/shock_model.hpp"
#include "support.hpp"

using namespace ifp;
using ifp::test::matrix;
using ifp::test::single_state;

TEST_CASE("k_matrix one atom") {
  const ShockModel m = single_state({{1.0, 0.96, 1.02, 1.0}});
  CHECK(k_matrix(m, 1.0)(0, 0) == doctest::Approx(0.9792).epsilon(1e-15));
}

TEST_CASE("k_matrix at theta 0 with unit beta is P") {
  const ExtendedMatrix P = matrix({{0.3, 0.7, 0.0}, {0.25, 0.25, 0.5}, {0.0, 0.1, 0.9}});
  const ShockModel m = test::uniform_atoms(P, {{0.5, 1.0, 1.1, 1.0}, {0.5, 1.0, 0.0, 2.0}});
  CHECK(k_matrix(m, 0.0) == m.transition());
}

TEST_CASE("k_matrix of a discretized lognormal return") {
  const double delta = 0.05, mu = 0.02, sigma = 0.2, gamma = 3.0;
  std::vector<ShockAtom> atoms;
  for (const auto& x : discretize_lognormal(mu - 0.5 * sigma * sigma, sigma, 7))
    atoms.push_back({x.probability, std::exp(-delta), x.value, 1.0});
  const double k = k_matrix(single_state(atoms), 1.0 - gamma)(0, 0);
  const double closed = std::exp(-delta + (1.0 - gamma) * (mu - 0.5 * gamma * sigma * sigma));
  CHECK(k == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("zero return contributes nothing for negative powers") {
  const ShockModel m = single_state({{1.0, 0.9, 0.0, 1.0}});
  CHECK(k_matrix(m, -1.0)(0, 0) == 0.0);
  CHECK(k_matrix(m, 1.0)(0, 0) == 0.0);
  CHECK(k_matrix(m, 0.0)(0, 0) == 0.9);
}

TEST_CASE("overflowing entries saturate to infinity") {
  const ShockModel m = single_state({{1.0, 0.9, 1e-300, 1.0}});
  CHECK(std::isinf(k_matrix(m, -3.0)(0, 0)));
}

TEST_CASE("detrend") {
  const ShockModel m = single_state({{1.0, 0.96, 1.05, 1.0}});
  SUBCASE("g = 0 leaves the model unchanged") { CHECK(detrend(m, 0.0, 2.0) == m); }
  SUBCASE("log utility keeps beta") {
    const ShockModel d = detrend(m, 0.03, 1.0);
    CHECK(d.atoms(0, 0)[0].beta == 0.96);
    CHECK(d.atoms(0, 0)[0].ret == doctest::Approx(1.05 * std::exp(-0.03)).epsilon(1e-15));
    CHECK(d.atoms(0, 0)[0].income == 1.0);
  }
  SUBCASE("gamma 2") {
    CHECK(detrend(m, 0.01, 2.0).atoms(0, 0)[0].beta == doctest::Approx(0.950448).epsilon(1e-6));
  }
}

TEST_CASE("check_assumptions") {
  SUBCASE("calibrated model passes") {
    const CalibrationParams p = default_params();
    const AssumptionReport r = check_assumptions(build_calibrated_model(p), make_preferences(2.0));
    CHECK(r.passed);
    CHECK(r.r_k0 < 1.0);
    CHECK(r.r_k1 < 1.0);
    CHECK(r.income_conditions_hold);
  }
  SUBCASE("unit discounting and return fail both radii") {
    const AssumptionReport r = check_assumptions(single_state({{1.0, 1.0, 1.0, 1.0}}), make_preferences(2.0));
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.r_k0_below_one);
    CHECK_FALSE(r.r_k1_below_one);
  }
  SUBCASE("zero income atom fails the marginal utility check") {
    const AssumptionReport r = check_assumptions(
        single_state({{0.5, 0.9, 1.0, 0.0}, {0.5, 0.9, 1.0, 1.0}}), make_preferences(2.0));
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.income_conditions_hold);
    REQUIRE(r.pairs.size() == 1);
    CHECK_FALSE(r.pairs[0].marginal_utility_finite);
    CHECK_FALSE(r.pairs[0].discounted_marginal_utility_finite);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ShockModel(matrix({{0.5, 0.4}, {0.5, 0.5}}), ShockModel::AtomTable(4)), ModelValidation);
  CHECK_THROWS_AS(ShockModel(matrix({{1.0}}), ShockModel::AtomTable(1)), ModelValidation);
  CHECK_THROWS_AS(single_state({{0.5, 0.9, 1.0, 1.0}}), ModelValidation);
  CHECK_THROWS_AS(single_state({{1.0, -0.1, 1.0, 1.0}}), ModelValidation);
  CHECK_THROWS_AS(single_state({{1.0, 0.9, 1.0, std::nan("")}}), ModelValidation);
  CHECK_THROWS_AS(make_preferences(0.0), ModelValidation);
}

TEST_CASE("rows within tolerance are renormalized exactly") {
  const ShockModel m(matrix({{0.5 + 4e-13, 0.5}, {0.2, 0.8}}),
                     {{{1.0, 0.9, 1.0, 1.0}}, {{1.0, 0.9, 1.0, 1.0}}, {{1.0, 0.9, 1.0, 1.0}},
                      {{1.0, 0.9, 1.0, 1.0}}});
  CHECK(m.transition()(0, 0) + m.transition()(0, 1) == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("merged combines identical atoms") {
  const ShockModel m = single_state({{0.25, 0.9, 1.0, 1.0}, {0.5, 0.9, 1.1, 1.0}, {0.25, 0.9, 1.0, 1.0}});
  const ShockModel mm = m.merged();
  REQUIRE(mm.atoms(0, 0).size() == 2);
  CHECK(mm.atoms(0, 0)[0].probability == doctest::Approx(0.5));
  CHECK(mm.atoms(0, 0)[0].ret == 1.0);
}

TEST_CASE("property: K(0) is bounded by max beta times P") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const ShockModel m = test::random_model(rng, 1 + trial % 5, 0.2, 1.2, 0.0, 2.0);
    double bmax = 0.0;
    for (const auto& list : m.atom_table())
      for (const auto& a : list) bmax = std::max(bmax, a.beta);
    const ExtendedMatrix k = k_matrix(m, 0.0);
    for (std::size_t i = 0; i < m.num_states(); ++i)
      for (std::size_t j = 0; j < m.num_states(); ++j)
        CHECK(k(i, j) <= bmax * m.transition()(i, j) * (1.0 + 1e-15));
  }
}

TEST_CASE("property: constant beta and R give K(theta) = beta R^theta P") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ExtendedMatrix P = test::random_stochastic(rng, 4, 0.3);
    const double beta = 0.9 + 0.001 * trial, R = 0.95 + 0.002 * trial;
    const ShockModel m = test::uniform_atoms(P, {{0.4, beta, R, 1.0}, {0.6, beta, R, 2.0}});
    for (double theta : {-3.0, -1.0, 0.0, 0.5, 1.0}) {
      const ExtendedMatrix k = k_matrix(m, theta);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          CHECK(k(i, j) == doctest::Approx(beta * std::pow(R, theta) * P(i, j)).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: detrend round trip") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ShockModel m = test::random_model(rng, 3, 0.5, 1.0, 0.5, 1.5);
    const double g = 0.001 * (trial - 25), gamma = 0.5 + 0.1 * trial;
    const ShockModel back = detrend(detrend(m, g, gamma), -g, gamma);
    for (std::size_t k = 0; k < m.atom_table().size(); ++k)
      for (std::size_t a = 0; a < m.atom_table()[k].size(); ++a) {
        const auto& x = m.atom_table()[k][a];
        const auto& y = back.atom_table()[k][a];
        CHECK(std::abs(x.beta - y.beta) <= 1e-12);
        CHECK(std::abs(x.ret - y.ret) <= 1e-12);
        CHECK(x.income == y.income);
        CHECK(x.probability == y.probability);
      }
  }
}

TEST_CASE("property: detrended K is a rescaled K") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const ShockModel m = test::random_model(rng, 3, 0.5, 1.0, 0.5, 1.5);
    const double g = 0.002 * (trial - 25), gamma = 0.5 + 0.1 * trial;
    const ShockModel d = detrend(m, g, gamma);
    for (double theta : {0.0, 1.0, 1.0 - gamma}) {
      const ExtendedMatrix k = k_matrix(m, theta), kd = k_matrix(d, theta);
      const double scale = std::exp(((1.0 - gamma) - theta) * g);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(kd(i, j) == doctest::Approx(scale * k(i, j)).epsilon(1e-12));
    }
  }
}
