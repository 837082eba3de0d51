#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ifp/extended_matrix.hpp"
#include "ifp/policy_solver.hpp"
#include "ifp/shock_model.hpp"

namespace ifp {

struct ErgodicityResult {
  double radius = 0.0;  ///< r(P ⊙ G), G = conditional mean returns
  bool pass = false;     ///< radius below 1 - 1e-12
};

ErgodicityResult ergodicity_check(const ShockModel& model);

/// Conditional mean return matrix G (zero for pairs without atoms).
ExtendedMatrix expected_return_matrix(const ShockModel& model);

/// M(alpha)_{z zhat} = E (R (1 - c_bar(z)))^alpha, not weighted by P.
ExtendedMatrix mgf_matrix(const ShockModel& model, std::span<const double> c_bar, double alpha);

/// r(P ⊙ M(alpha)).
double mgf_radius(const ShockModel& model, std::span<const double> c_bar, double alpha);

struct ParetoResult {
  double alpha = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  ///< |r(P ⊙ M(alpha)) - 1|
};

/// Root of r(P ⊙ M(alpha)) = 1. The bracket grows geometrically from
/// alpha = 1; throws NoRoot if r stays below 1 up to alpha = 1000 and
/// PreconditionViolation if the ergodicity check fails.
ParetoResult pareto_exponent(const ShockModel& model, std::span<const double> c_bar);

struct PanelConfig {
  std::size_t num_households = 100000;
  std::size_t periods = 6000;
  std::size_t burn_in = 3600;
  std::uint64_t seed = 42;
  std::size_t record_thinning = 120;
  /// Worker threads; the output does not depend on this.
  std::size_t workers = 1;
};

struct TailTable {
  std::vector<double> thresholds;
  std::vector<double> tail_probability;  ///< Pr(wealth > threshold)
  std::size_t samples = 0;
  /// Cross-sectional mean of log wealth at each recorded period.
  std::vector<double> mean_log_wealth;
  /// Pooled recorded wealth levels, sorted ascending.
  std::vector<double> pooled_wealth;
};

/// Panel simulation of a' = R (a - c(a, z)) + Y. Household h draws its
/// shocks for period t from Philox keyed by the seed with counter (h, t),
/// so partitioning across workers does not change the output.
///
/// Throws PreconditionViolation if the ergodicity check fails or the
/// configuration is inconsistent, ExplosionDetected if wealth exceeds 1e15.
TailTable simulate_panel(const ShockModel& model, const ConsumptionPolicy& policy,
                         const PanelConfig& cfg);

/// Builds a tail table from raw samples: thresholds are log-spaced,
/// `per_decade` per decade, spanning the positive samples.
TailTable tail_table_from_samples(std::vector<double> samples, std::size_t per_decade = 20);

/// OLS slope of log Pr(wealth > a) on log a over thresholds in
/// [10^log10_lo, 10^log10_hi] with positive probability. Throws
/// InsufficientTail with fewer than 5 usable thresholds.
double tail_slope(const TailTable& table, double log10_lo, double log10_hi);

/// tail_slope over the top `decades` decades below the largest threshold
/// with positive tail probability.
double top_tail_slope(const TailTable& table, double decades = 2.0);

}  // namespace ifp
