#include "ifp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ifp/error.hpp"

namespace ifp {

std::vector<double> QuadratureRule::normalized_weights() const {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out(weights);
  for (double& w : out) w /= total;
  return out;
}

// Newton iteration on orthonormal Hermite polynomials with the usual
// asymptotic starting guesses for the largest roots.
QuadratureRule gauss_hermite(std::size_t n) {
  if (n < 1 || n > 50) throw ParamValidation("Gauss-Hermite order must lie in [1, 50]");
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const double dn = static_cast<double>(n);
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(dn, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double dj = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (dj + 1.0)) * p2 - std::sqrt(dj / (dj + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * dn) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (n % 2 == 1 && i == m - 1) z = 0.0;
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return {std::move(x), std::move(w)};
}

std::vector<LognormalAtom> discretize_lognormal(double mu, double sigma, std::size_t n) {
  const QuadratureRule rule = gauss_hermite(n);
  const std::vector<double> p = rule.normalized_weights();
  std::vector<LognormalAtom> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = {p[i], std::exp(mu + std::numbers::sqrt2 * sigma * rule.nodes[i])};
  return out;
}

ExtendedMatrix printed_transition_matrix() {
  ExtendedMatrix p(3);
  const double rows[3][3] = {{0.9822, 0.0175, 0.0002}, {0.3333, 0.6665, 0.0002}, {0.0016, 0.0001, 0.9983}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p(i, j) = rows[i][j];
  return p;
}

RenormalizedMatrix renormalize_rows(const ExtendedMatrix& m) {
  RenormalizedMatrix out{m, 0.0};
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j);
    for (std::size_t j = 0; j < m.dim(); ++j) {
      out.matrix(i, j) = m(i, j) / s;
      out.max_adjustment = std::max(out.max_adjustment, std::abs(out.matrix(i, j) - m(i, j)));
    }
  }
  return out;
}

CalibrationParams default_params() {
  CalibrationParams p;
  p.P = printed_transition_matrix();
  return p;
}

namespace {

void validate(const CalibrationParams& p) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(p.sigma > 0.0)) throw ParamValidation("sigma must be positive");
  if (!in_unit(p.theta_share)) throw ParamValidation("portfolio share must lie in [0, 1]");
  if (!in_unit(p.tau_k) || !in_unit(p.tau_e)) throw ParamValidation("tax rates must lie in [0, 1]");
  if (!(p.death_prob > 0.0 && p.death_prob < 1.0))
    throw ParamValidation("death probability must lie in (0, 1)");
  if (!(p.gamma > 0.0)) throw ParamValidation("gamma must be positive");
  if (!std::isfinite(p.delta_annual) || !std::isfinite(p.g_monthly) || !std::isfinite(p.log_Rf) ||
      !std::isfinite(p.mu))
    throw ParamValidation("rates must be finite");
  for (double y : p.incomes)
    if (!(y > 0.0)) throw ParamValidation("incomes must be positive");
  if (p.quad_nodes < 1 || p.quad_nodes > 50) throw ParamValidation("quad_nodes must lie in [1, 50]");
  if (p.P.dim() != 3) throw ParamValidation("P must be 3x3");
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (!(p.P(i, j) >= 0.0)) throw ParamValidation("P entries must be nonnegative");
      s += p.P(i, j);
    }
    if (std::abs(s - 1.0) > 1e-3) throw ParamValidation("P rows must sum to 1 up to rounding");
  }
}

}  // namespace

ShockModel build_raw_model(const CalibrationParams& params) {
  validate(params);
  const ExtendedMatrix P = renormalize_rows(params.P).matrix;
  const double beta = std::exp(-params.delta_annual / 12.0);
  const double rf = std::exp(params.log_Rf);
  const auto excess = discretize_lognormal(params.mu, params.sigma, params.quad_nodes);

  ShockModel::AtomTable atoms(9);
  for (std::size_t z = 0; z < 3; ++z) {
    for (std::size_t zh = 0; zh < 3; ++zh) {
      auto& list = atoms[z * 3 + zh];
      const double y = params.incomes[zh];
      for (int d = 0; d <= 1; ++d) {
        const double pd = d == 0 ? 1.0 - params.death_prob : params.death_prob;
        const double estate = 1.0 - params.tau_e * d;
        if (z < 2) {
          list.push_back({pd, beta, estate * rf, y});
        } else {
          for (const auto& x : excess) {
            const double r = estate * rf * (1.0 + (1.0 - params.tau_k) * (x.value - 1.0) * params.theta_share);
            list.push_back({pd * x.probability, beta, r, y});
          }
        }
      }
    }
  }
  return ShockModel(P, std::move(atoms), {"employed", "unemployed", "entrepreneur"});
}

ShockModel build_calibrated_model(const CalibrationParams& params) {
  return detrend(build_raw_model(params), params.g_monthly, params.gamma);
}

}  // namespace ifp
