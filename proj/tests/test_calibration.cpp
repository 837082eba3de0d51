#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ifp/calibration.hpp"
#include "ifp/error.hpp"
#include "ifp/shock_model.hpp"
#include "support.hpp"

using namespace ifp;

namespace {

// E[beta R^{1-gamma}] for the entrepreneur by composite Simpson over the
// standard normal density.
double entrepreneur_moment(const CalibrationParams& p) {
  const double beta = std::exp(-p.delta_annual / 12.0), rf = std::exp(p.log_Rf);
  const int n = 40000;
  const double lo = -12.0, hi = 12.0, h = (hi - lo) / n;
  double total = 0.0;
  for (int d = 0; d <= 1; ++d) {
    const double pd = d == 0 ? 1.0 - p.death_prob : p.death_prob;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double z = lo + h * i;
      const double x = std::exp(p.mu + p.sigma * z);
      const double r = (1.0 - p.tau_e * d) * rf * (1.0 + (1.0 - p.tau_k) * (x - 1.0) * p.theta_share);
      const double f = beta * std::pow(r, 1.0 - p.gamma) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
      integral += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    total += pd * integral * h / 3.0;
  }
  return total;
}

}  // namespace

TEST_CASE("gauss_hermite examples") {
  const QuadratureRule one = gauss_hermite(1);
  REQUIRE(one.nodes.size() == 1);
  CHECK(one.nodes[0] == 0.0);
  CHECK(one.normalized_weights()[0] == 1.0);

  const QuadratureRule seven = gauss_hermite(7);
  const std::vector<double> w = seven.normalized_weights();
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-14);
  for (int k : {1, 3, 5, 7}) {
    double moment = 0.0;
    for (std::size_t i = 0; i < 7; ++i) moment += w[i] * std::pow(seven.nodes[i], k);
    CHECK(std::abs(moment) <= 1e-14);
  }

  CHECK_THROWS_AS(gauss_hermite(0), ParamValidation);
  CHECK_THROWS_AS(gauss_hermite(51), ParamValidation);
}

TEST_CASE("gauss_hermite matches the Jacobi eigenproblem") {
  for (int n = 1; n <= 50; ++n) {
    const QuadratureRule r = gauss_hermite(static_cast<std::size_t>(n));
    const auto [x, w] = test::golub_welsch(n);
    for (int i = 0; i < n; ++i) {
      CHECK(r.nodes[i] == doctest::Approx(x[i]).epsilon(1e-12));
      CHECK(std::abs(r.weights[i] - w[i]) <= 1e-13);
    }
  }
}

TEST_CASE("discretized lognormal mean") {
  const double mu = 5.4079e-3, sigma = 0.0414;
  double mean = 0.0;
  for (const auto& a : discretize_lognormal(mu - 0.5 * sigma * sigma, sigma, 7)) mean += a.probability * a.value;
  CHECK(std::abs(mean - std::exp(mu)) <= 1e-10);
}

TEST_CASE("default parameters") {
  const CalibrationParams p = default_params();
  CHECK(p.delta_annual == 0.04);
  CHECK(p.g_monthly == 1.6208e-3);
  CHECK(p.log_Rf == 5.3477e-4);
  CHECK(p.mu == 5.4079e-3);
  CHECK(p.sigma == 0.0414);
  CHECK(p.theta_share == 0.6373);
  CHECK(p.quad_nodes == 7);
  CHECK(p.death_prob == doctest::Approx(1.0 - std::exp(-1.0 / 300.0)).epsilon(1e-15));
  CHECK(p.P(0, 0) == 0.9822);
  CHECK(p.P(2, 2) == 0.9983);

  const RenormalizedMatrix r = renormalize_rows(p.P);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 3; ++j) s += r.matrix(i, j);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(r.max_adjustment < 5e-4);
  CHECK(r.max_adjustment > 0.0);

  const ShockModel raw = build_raw_model(p);
  CHECK(raw.atoms(0, 0)[0].beta == doctest::Approx(std::exp(-0.04 / 12.0)).epsilon(1e-15));
}

TEST_CASE("calibrated model structure") {
  CalibrationParams p = default_params();
  const ShockModel m = build_calibrated_model(p);
  for (std::size_t z = 0; z < 3; ++z)
    for (std::size_t zh = 0; zh < 3; ++zh) {
      const auto atoms = m.atoms(z, zh);
      CHECK(atoms.size() == (z < 2 ? 2u : 14u));
      double mass = 0.0;
      for (const auto& a : atoms) {
        mass += a.probability;
        CHECK(a.income == p.incomes[zh]);
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));
    }

  SUBCASE("workers face no return risk while alive") {
    for (std::size_t z = 0; z < 2; ++z)
      for (std::size_t zh = 0; zh < 3; ++zh) CHECK(m.atoms(z, zh)[0].ret == m.atoms(0, 0)[0].ret);
  }
  SUBCASE("no estate tax collapses the death atoms") {
    p.tau_e = 0.0;
    const ShockModel mm = build_calibrated_model(p).merged();
    CHECK(mm.atoms(0, 1).size() == 1);
    CHECK(mm.atoms(2, 2).size() == 7);
  }
  SUBCASE("no risky share equalizes returns") {
    p.theta_share = 0.0;
    const ShockModel mm = build_calibrated_model(p);
    for (const auto& a : mm.atoms(2, 0)) {
      const bool died = a.ret < mm.atoms(0, 0)[0].ret;
      CHECK(a.ret == (died ? mm.atoms(0, 0)[1].ret : mm.atoms(0, 0)[0].ret));
    }
  }
  SUBCASE("invalid parameters") {
    p.sigma = 0.0;
    CHECK_THROWS_AS(build_calibrated_model(p), ParamValidation);
  }
}

TEST_CASE("property: quadrature error decays with the node count") {
  CalibrationParams p = default_params();
  p.gamma = 4.0;
  const double reference = entrepreneur_moment(p);
  double previous = 1.0;
  for (std::size_t n : {3, 7, 15, 31}) {
    p.quad_nodes = n;
    const ShockModel raw = build_raw_model(p);
    double e = 0.0;
    for (const auto& a : raw.atoms(2, 2)) e += a.probability * discounted_return_power(a.beta, a.ret, 1.0 - p.gamma);
    const double err = std::abs(e - reference);
    CHECK(err <= std::max(previous, 1e-13));  // reference accuracy floor
    previous = err;
  }
  CHECK(previous < 1e-13);
}
