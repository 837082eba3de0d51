#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ifp/extended_matrix.hpp"
#include "ifp/shock_model.hpp"

namespace ifp {

/// Gauss-Hermite rule for the weight e^{-x^2}.
struct QuadratureRule {
  std::vector<double> nodes;    ///< ascending
  std::vector<double> weights;  ///< raw weights, summing to sqrt(pi)

  /// Weights divided by their sum, i.e. probabilities for x ~ N(0, 1/2).
  std::vector<double> normalized_weights() const;
};

/// 1 <= n <= 50; throws ParamValidation otherwise.
QuadratureRule gauss_hermite(std::size_t n);

/// Atoms (probability, value) for log X ~ N(mu, sigma^2): log X = mu + sqrt(2) sigma x_i.
struct LognormalAtom {
  double probability;
  double value;
};
std::vector<LognormalAtom> discretize_lognormal(double mu, double sigma, std::size_t n);

/// Worker / unemployed / entrepreneur economy with risky entrepreneurial
/// returns, death with estate tax, and deterministic growth. Monthly.
struct CalibrationParams {
  double log_Rf = 5.3477e-4;
  double mu = 5.4079e-3;
  double sigma = 0.0414;
  double theta_share = 0.6373;
  double tau_k = 0.25;
  double tau_e = 0.4;
  /// Per-period death probability of the household head; 25-year
  /// expected tenure.
  double death_prob = 1.0 - std::exp(-1.0 / (25.0 * 12.0));
  double delta_annual = 0.04;
  double gamma = 2.0;
  double g_monthly = 1.6208e-3;
  std::array<double, 3> incomes{1.0, 0.2, 2.5};
  ExtendedMatrix P;  ///< 3x3, rows as printed (renormalized when building)
  std::size_t quad_nodes = 7;
};

CalibrationParams default_params();

/// The printed transition matrix, before renormalization.
ExtendedMatrix printed_transition_matrix();

/// Row-renormalized copy and the largest absolute entry adjustment.
struct RenormalizedMatrix {
  ExtendedMatrix matrix;
  double max_adjustment = 0.0;
};
RenormalizedMatrix renormalize_rows(const ExtendedMatrix& m);

/// Builds the detrended 3-state model. Origin states 0 and 1 (workers)
/// carry 2 atoms per pair (survive/die); origin state 2 (entrepreneur)
/// carries 2 * quad_nodes atoms. Throws ParamValidation.
ShockModel build_calibrated_model(const CalibrationParams& params);

/// Same model before detrending (g = 0 in effect).
ShockModel build_raw_model(const CalibrationParams& params);

}  // namespace ifp
