#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ifp/extended_matrix.hpp"
#include "ifp/shock_model.hpp"

namespace ifp {

enum class MpcRegime { Positive, Zero };

/// Radii at or above this value count as >= 1 when classifying regimes.
inline constexpr double kRegimeThreshold = 1.0 - 1e-12;

struct MpcResult {
  std::vector<double> x_star;  ///< in [1, +inf]
  std::vector<double> c_bar;   ///< x_star^(-1/gamma), 0 in the Zero regime
  std::vector<MpcRegime> regime;
  std::size_t iterations_used = 0;
  bool iteration_converged = true;   ///< false if the cap was hit
  bool converged_analytically = true;  ///< Zero states came from the structural test
  double r_k0 = 0.0;
  double r_k1 = 0.0;
  double r_k1mg = 0.0;  ///< r(K(1 - gamma)), +inf if an entry is infinite
  double boundary_proximity = 0.0;  ///< |r(K(1-gamma)) - 1| for the closest block
};

struct MpcIterationOptions {
  double rel_tol = 1e-12;
  std::size_t max_iter = 100000;
};

/// (Fx)(z) = (1 + (Kx)(z)^{1/gamma})^gamma, with 0 * inf = 0 and +inf where
/// (Kx)(z) is infinite.
std::vector<double> apply_F(const ExtendedMatrix& k, double gamma, std::span<const double> x);

/// Asymptotic MPCs c_bar(z) = lim c(a, z)/a.
///
/// States are classified structurally first: z is Zero iff it can reach
/// (in zero or more steps) a block of K(1-gamma) whose radius is >= 1 or
/// infinite, or a state with an infinite outgoing entry. The fixed-point
/// iteration then runs on the remaining states only.
///
/// Throws AssumptionViolation unless r(K(0)) < 1 and r(K(1)) < 1.
MpcResult solve_mpc(const ShockModel& model, const Preferences& prefs,
                    const MpcIterationOptions& opts = {});

/// Fixed-point iteration x_{n+1} = F x_n from x_0 = 1 on a finite matrix.
/// Reports the number of steps and whether the tolerance was reached.
struct FixedPointRun {
  std::vector<double> x;
  std::size_t iterations = 0;
  bool converged = false;
};
FixedPointRun iterate_F(const ExtendedMatrix& k, double gamma, const MpcIterationOptions& opts = {});

/// Closed-form solution of the zero-income problem (gamma != 1).
struct ZeroIncomeSolution {
  std::vector<double> value_coefficients;  ///< x*(z)
  std::vector<double> mpc;                 ///< x*(z)^(-1/gamma)
  double gamma = 1.0;

  double value(double a, std::size_t z) const;
  double consumption(double a, std::size_t z) const { return mpc[z] * a; }
};

/// Throws NoSolution when r(K(1-gamma)) >= 1, PreconditionViolation when
/// gamma == 1.
ZeroIncomeSolution zero_income_solution(const ShockModel& model, const Preferences& prefs);

enum class RadiusTarget { K0, K1, K1MinusGamma };

/// Builds a (detrended) model for an annual discount rate delta and risk
/// aversion gamma.
using ModelTemplate = std::function<ShockModel(double delta, double gamma)>;

struct BoundaryPoint {
  double gamma = 0.0;
  std::optional<double> delta;  ///< nullopt: no sign change on [-1, 1]
};

/// For each gamma, the delta in [-1, 1] at which the target radius equals 1,
/// by bisection to 1e-10.
std::vector<BoundaryPoint> regime_boundary(const ModelTemplate& make_model,
                                           std::span<const double> gamma_grid,
                                           RadiusTarget target);

/// Spectral radius of K(theta) for the target, +inf if K has an inf entry.
double target_radius(const ShockModel& model, double gamma, RadiusTarget target);

}  // namespace ifp
