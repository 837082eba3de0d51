#pragma once

#include <cstddef>
#include <vector>

#include "ifp/error.hpp"
#include "ifp/shock_model.hpp"

namespace ifp {

/// Strictly increasing wealth nodes a_0 < ... < a_{N-1} with a_0 >= 0.
class WealthGrid {
 public:
  /// Throws ModelValidation unless N >= 2, points strictly increase and
  /// a_0 >= 0.
  explicit WealthGrid(std::vector<double> points);

  /// a_i = a_max (e^{s t_i} - 1) / (e^s - 1), t_i = i / (N - 1).
  /// shape <= 0 selects the default s = log(1 + a_max).
  static WealthGrid affine_exponential(std::size_t n, double a_max, double shape = 0.0);

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const noexcept { return points_; }
  double a_max() const noexcept { return points_.back(); }

  friend bool operator==(const WealthGrid&, const WealthGrid&) = default;

 private:
  std::vector<double> points_;
};

/// Consumption c(a_i, z) on a wealth grid, with linear interpolation inside
/// and linear extrapolation above a_max using tail_slope(z) when positive
/// (the last segment's slope otherwise).
struct ConsumptionPolicy {
  WealthGrid grid;
  std::vector<std::vector<double>> values;  ///< [z][i]
  std::vector<double> tail_slope;           ///< asymptotic MPC per state
  std::size_t iterations = 0;
  double final_metric = 0.0;
  bool converged = false;  ///< stopping rule was the tolerance, not the cap

  std::size_t num_states() const noexcept { return values.size(); }
  /// c(a, z) for any a >= 0. Below the first node the chord from the
  /// origin is used, so c(0, z) = 0.
  double operator()(double a, std::size_t z) const;
};

/// c_0(a, z) = a on every node.
ConsumptionPolicy consume_everything(const WealthGrid& grid, std::size_t num_states,
                                     std::vector<double> tail_slope = {});

/// One application of the time iteration operator via the endogenous grid
/// method. The savings grid is the wealth grid itself (s_0 = 0 pins the
/// wealth level below which the borrowing constraint binds).
///
/// Throws NonFiniteExpectation if an expected marginal value is not finite.
ConsumptionPolicy time_iteration_step(const ConsumptionPolicy& c, const ShockModel& model,
                                      const Preferences& prefs);

/// sup over states and nodes with a > 0 of |c1^{-gamma} - c2^{-gamma}|.
/// Throws GridMismatch if the grids or state counts differ.
double rho_metric(const ConsumptionPolicy& c1, const ConsumptionPolicy& c2, const Preferences& prefs);

struct SolveOptions {
  double tol = 1e-9;
  std::size_t max_iter = 20000;
  /// rho is evaluated on nodes with a > floor_share * median income.
  double metric_floor_share = 0.05;
};

/// Thrown when the iteration cap is reached; carries the last iterate.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, ConsumptionPolicy last)
      : Error(ErrorKind::Numerical, "NoConvergence", what), last_(std::move(last)) {}
  const ConsumptionPolicy& last_iterate() const noexcept { return last_; }

 private:
  ConsumptionPolicy last_;
};

/// Iterates the time iteration operator from c_0(a, z) = a until both the
/// marginal-utility gap and the sup relative consumption change fall below
/// tol. The asymptotic MPCs from solve_mpc drive extrapolation.
///
/// Throws AssumptionViolation if check_assumptions fails (including zero
/// income atoms), NoConvergence when max_iter is reached.
ConsumptionPolicy solve_policy(const ShockModel& model, const Preferences& prefs,
                               const WealthGrid& grid, const SolveOptions& opts = {});

/// 1 - (E beta R u'(c(R(a - c) + Y, zhat)))^{-1/gamma} / c(a, z); zero where
/// the borrowing constraint binds.
double euler_residual(const ConsumptionPolicy& policy, const ShockModel& model,
                      const Preferences& prefs, double a, std::size_t z);

/// Finite-horizon backward induction from the terminal rule c = a. Returns
/// the period-0 policy after `horizon` steps.
ConsumptionPolicy brute_force_oracle(const ShockModel& model, const Preferences& prefs,
                                     std::size_t horizon, const WealthGrid& grid);

/// Weighted median of incomes under the stationary distribution of P and
/// the atom probabilities.
double median_income(const ShockModel& model);

}  // namespace ifp
