#include "ifp/asymptotic_mpc.hpp"

#include <algorithm>
#include <cmath>

#include "ifp/error.hpp"
#include "ifp/spectral.hpp"

namespace ifp {

namespace {

double radius_or_inf(const ExtendedMatrix& k) {
  return k.all_finite() ? spectral_radius(k) : kInf;
}

}  // namespace

std::vector<double> apply_F(const ExtendedMatrix& k, double gamma, std::span<const double> x) {
  std::vector<double> y = k.apply(x);
  for (double& v : y) {
    if (std::isinf(v)) continue;
    v = std::pow(1.0 + std::pow(v, 1.0 / gamma), gamma);
  }
  return y;
}

FixedPointRun iterate_F(const ExtendedMatrix& k, double gamma, const MpcIterationOptions& opts) {
  FixedPointRun run;
  run.x.assign(k.dim(), 1.0);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    std::vector<double> next = apply_F(k, gamma, run.x);
    double change = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (!std::isfinite(next[i])) {
        finite = false;
        break;
      }
      change = std::max(change, std::abs(next[i] - run.x[i]) / next[i]);
    }
    run.x = std::move(next);
    run.iterations = it;
    if (!finite) return run;
    if (change <= opts.rel_tol) {
      run.converged = true;
      return run;
    }
  }
  return run;
}

MpcResult solve_mpc(const ShockModel& model, const Preferences& prefs, const MpcIterationOptions& opts) {
  const double gamma = prefs.gamma;
  const ExtendedMatrix k0 = k_matrix(model, 0.0);
  const ExtendedMatrix k1 = k_matrix(model, 1.0);
  MpcResult res;
  res.r_k0 = radius_or_inf(k0);
  res.r_k1 = radius_or_inf(k1);
  if (!(res.r_k0 < 1.0) || !(res.r_k1 < 1.0))
    throw AssumptionViolation("asymptotic MPCs need r(K(0)) < 1 and r(K(1)) < 1; got " +
                              std::to_string(res.r_k0) + " and " + std::to_string(res.r_k1));

  const ExtendedMatrix k = k_matrix(model, 1.0 - gamma);
  const std::size_t n = k.dim();
  res.r_k1mg = radius_or_inf(k);

  const BlockDecomposition dec = irreducible_blocks(k);
  std::vector<bool> target(n, false);
  res.boundary_proximity = kInf;
  for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
    const double r = dec.block_radii[b];
    if (std::isfinite(r)) res.boundary_proximity = std::min(res.boundary_proximity, std::abs(r - 1.0));
    if (r >= kRegimeThreshold)
      for (std::size_t v : dec.blocks[b]) target[v] = true;
  }
  // An infinite off-diagonal entry sends (Kx)(z) to +inf for any x >= 1.
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (std::isinf(k(v, w))) target[v] = true;

  res.regime.assign(n, MpcRegime::Positive);
  std::vector<std::size_t> positive;
  for (std::size_t z = 0; z < n; ++z) {
    bool zero = target[z];
    if (!zero) {
      const std::vector<bool> reach = reachable_set(k, z);
      for (std::size_t w = 0; w < n && !zero; ++w) zero = reach[w] && target[w];
    }
    if (zero)
      res.regime[z] = MpcRegime::Zero;
    else
      positive.push_back(z);
  }

  res.x_star.assign(n, kInf);
  res.c_bar.assign(n, 0.0);
  if (!positive.empty()) {
    const FixedPointRun run = iterate_F(k.submatrix(positive), gamma, opts);
    res.iterations_used = run.iterations;
    res.iteration_converged = run.converged;
    for (std::size_t i = 0; i < positive.size(); ++i) {
      const std::size_t z = positive[i];
      res.x_star[z] = run.x[i];
      res.c_bar[z] = std::isfinite(run.x[i]) ? std::pow(run.x[i], -1.0 / gamma) : 0.0;
    }
  }
  return res;
}

double ZeroIncomeSolution::value(double a, std::size_t z) const {
  return value_coefficients[z] * std::pow(a, 1.0 - gamma) / (1.0 - gamma);
}

ZeroIncomeSolution zero_income_solution(const ShockModel& model, const Preferences& prefs) {
  if (prefs.gamma == 1.0)
    throw PreconditionViolation("the zero-income closed form requires gamma != 1");
  const ExtendedMatrix k = k_matrix(model, 1.0 - prefs.gamma);
  const double r = radius_or_inf(k);
  if (r >= kRegimeThreshold)
    throw NoSolution("zero-income problem has no finite solution: r(K(1-gamma)) = " +
                     std::to_string(r));
  const FixedPointRun run = iterate_F(k, prefs.gamma);
  if (!run.converged)
    throw NoSolution("fixed-point iteration did not converge (r(K(1-gamma)) = " +
                     std::to_string(r) + ")");
  ZeroIncomeSolution sol;
  sol.gamma = prefs.gamma;
  sol.value_coefficients = run.x;
  for (double x : run.x) sol.mpc.push_back(std::pow(x, -1.0 / prefs.gamma));
  return sol;
}

double target_radius(const ShockModel& model, double gamma, RadiusTarget target) {
  double theta = 0.0;
  switch (target) {
    case RadiusTarget::K0: theta = 0.0; break;
    case RadiusTarget::K1: theta = 1.0; break;
    case RadiusTarget::K1MinusGamma: theta = 1.0 - gamma; break;
  }
  return radius_or_inf(k_matrix(model, theta));
}

std::vector<BoundaryPoint> regime_boundary(const ModelTemplate& make_model,
                                           std::span<const double> gamma_grid,
                                           RadiusTarget target) {
  constexpr double kLo = -1.0, kHi = 1.0, kTol = 1e-10;
  std::vector<BoundaryPoint> out;
  for (double gamma : gamma_grid) {
    auto excess = [&](double delta) {
      return target_radius(make_model(delta, gamma), gamma, target) - 1.0;
    };
    BoundaryPoint bp{gamma, std::nullopt};
    double lo = kLo, hi = kHi;
    double f_lo = excess(lo), f_hi = excess(hi);
    if (f_lo >= 0.0 && f_hi < 0.0) {
      while (hi - lo > kTol) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) >= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      bp.delta = 0.5 * (lo + hi);
    }
    out.push_back(bp);
  }
  return out;
}

}  // namespace ifp
