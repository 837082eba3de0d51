#include "ifp/policy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ifp/asymptotic_mpc.hpp"
#include "ifp/spectral.hpp"

namespace ifp {

namespace {

// Piecewise-linear interpolation on increasing x with linear extrapolation
// at the top using `top_slope`, and the chord from the origin below x[0]
// when x[0] > 0.
double interp(const std::vector<double>& x, const std::vector<double>& y, double q, double top_slope) {
  const std::size_t n = x.size();
  if (q >= x[n - 1]) return y[n - 1] + top_slope * (q - x[n - 1]);
  if (q <= x[0]) {
    if (x[0] > 0.0) return y[0] * (q / x[0]);
    return y[0];
  }
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  const double w = (q - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + w * (y[hi] - y[lo]);
}

double last_segment_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  return (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
}

// E_z[beta R u'(c(R s + Y, zhat))].
double expected_marginal_value(const ConsumptionPolicy& c, const ShockModel& model,
                               const Preferences& prefs, std::size_t z, double s) {
  const std::size_t n = model.num_states();
  double m = 0.0;
  for (std::size_t zh = 0; zh < n; ++zh) {
    const double p = model.transition()(z, zh);
    if (p == 0.0) continue;
    double e = 0.0;
    for (const auto& atom : model.atoms(z, zh)) {
      const double br = atom.beta * atom.ret;
      if (br == 0.0) continue;
      const double next = c(atom.ret * s + atom.income, zh);
      e += atom.probability * br * prefs.marginal_utility(next);
    }
    m += p * e;
  }
  return m;
}

double rho_on_nodes(const ConsumptionPolicy& c1, const ConsumptionPolicy& c2,
                    const Preferences& prefs, double floor) {
  if (!(c1.grid == c2.grid) || c1.num_states() != c2.num_states())
    throw GridMismatch("policies are defined on different grids");
  double rho = 0.0;
  for (std::size_t z = 0; z < c1.num_states(); ++z)
    for (std::size_t i = 0; i < c1.grid.size(); ++i) {
      if (!(c1.grid[i] > floor)) continue;
      const double d = std::abs(prefs.marginal_utility(c1.values[z][i]) -
                                prefs.marginal_utility(c2.values[z][i]));
      rho = std::max(rho, d);
    }
  return rho;
}

double max_relative_change(const ConsumptionPolicy& next, const ConsumptionPolicy& prev) {
  double r = 0.0;
  for (std::size_t z = 0; z < next.num_states(); ++z)
    for (std::size_t i = 0; i < next.grid.size(); ++i) {
      if (!(next.grid[i] > 0.0)) continue;
      r = std::max(r, std::abs(next.values[z][i] - prev.values[z][i]) / prev.values[z][i]);
    }
  return r;
}

}  // namespace

WealthGrid::WealthGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ModelValidation("wealth grid needs at least 2 points");
  if (!(points_.front() >= 0.0)) throw ModelValidation("wealth grid must start at a >= 0");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i] > points_[i - 1]) || !std::isfinite(points_[i]))
      throw ModelValidation("wealth grid must be strictly increasing and finite");
}

WealthGrid WealthGrid::affine_exponential(std::size_t n, double a_max, double shape) {
  if (n < 2) throw ModelValidation("wealth grid needs at least 2 points");
  if (!(a_max > 0.0) || !std::isfinite(a_max)) throw ModelValidation("a_max must be positive");
  const double s = shape > 0.0 ? shape : std::log1p(a_max);
  std::vector<double> pts(n);
  const double denom = std::expm1(s);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    pts[i] = a_max * std::expm1(s * t) / denom;
  }
  pts.front() = 0.0;
  pts.back() = a_max;
  return WealthGrid(std::move(pts));
}

double ConsumptionPolicy::operator()(double a, std::size_t z) const {
  const auto& v = values[z];
  const auto& x = grid.points();
  double slope = 0.0;
  if (a >= x.back()) {
    const double tail = z < tail_slope.size() ? tail_slope[z] : 0.0;
    slope = tail > 0.0 ? tail : last_segment_slope(x, v);
  }
  return interp(x, v, a, slope);
}

ConsumptionPolicy consume_everything(const WealthGrid& grid, std::size_t num_states,
                                     std::vector<double> tail_slope) {
  ConsumptionPolicy c{grid, std::vector<std::vector<double>>(num_states, grid.points()),
                      std::move(tail_slope)};
  c.tail_slope.resize(num_states, 0.0);
  return c;
}

ConsumptionPolicy time_iteration_step(const ConsumptionPolicy& c, const ShockModel& model,
                                      const Preferences& prefs) {
  const std::size_t nz = model.num_states();
  if (c.num_states() != nz) throw GridMismatch("policy and model have different state counts");
  const auto& grid = c.grid.points();
  const std::size_t n = grid.size();

  ConsumptionPolicy out{c.grid, std::vector<std::vector<double>>(nz, std::vector<double>(n)),
                        c.tail_slope, c.iterations + 1};
  std::vector<double> endo_a(n), endo_c(n);
  for (std::size_t z = 0; z < nz; ++z) {
    auto& row = out.values[z];
    bool any_positive = false;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = grid[j];
      const double m = expected_marginal_value(c, model, prefs, z, s);
      if (!std::isfinite(m))
        throw NonFiniteExpectation("non-finite expected marginal value in state " +
                                   std::to_string(z) + " at savings " + std::to_string(s));
      if (m > 0.0) any_positive = true;
      endo_c[j] = prefs.inverse_marginal_utility(m);
      endo_a[j] = s + endo_c[j];
    }
    if (!any_positive) {
      // beta R = 0 everywhere: the continuation value is irrelevant.
      row = grid;
      continue;
    }
    const double top_slope = last_segment_slope(endo_a, endo_c);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = grid[i];
      if (a <= endo_a[0]) {
        row[i] = a;  // borrowing constraint binds
      } else {
        row[i] = std::min(a, interp(endo_a, endo_c, a, top_slope));
      }
    }
  }
  return out;
}

double rho_metric(const ConsumptionPolicy& c1, const ConsumptionPolicy& c2, const Preferences& prefs) {
  return rho_on_nodes(c1, c2, prefs, 0.0);
}

double median_income(const ShockModel& model) {
  const std::vector<double> pi = stationary_distribution(model.transition());
  std::vector<std::pair<double, double>> mass;  // (income, probability)
  const std::size_t n = model.num_states();
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t zh = 0; zh < n; ++zh) {
      const double w = pi[z] * model.transition()(z, zh);
      if (w == 0.0) continue;
      for (const auto& a : model.atoms(z, zh)) mass.emplace_back(a.income, w * a.probability);
    }
  std::sort(mass.begin(), mass.end());
  double total = 0.0;
  for (const auto& [y, p] : mass) total += p;
  double cum = 0.0;
  for (const auto& [y, p] : mass) {
    cum += p;
    if (cum >= 0.5 * total) return y;
  }
  return mass.empty() ? 0.0 : mass.back().first;
}

ConsumptionPolicy solve_policy(const ShockModel& model, const Preferences& prefs,
                               const WealthGrid& grid, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw PreconditionViolation("tolerance must be positive");
  const AssumptionReport rep = check_assumptions(model, prefs);
  if (!rep.passed)
    throw AssumptionViolation("model fails existence conditions (r(K(0)) = " +
                              std::to_string(rep.r_k0) + ", r(K(1)) = " + std::to_string(rep.r_k1) +
                              (rep.income_conditions_hold ? "" : ", zero-income atoms present") + ")");
  const MpcResult mpc = solve_mpc(model, prefs);
  const double floor = opts.metric_floor_share * median_income(model);

  ConsumptionPolicy c = consume_everything(grid, model.num_states(), mpc.c_bar);
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    ConsumptionPolicy next = time_iteration_step(c, model, prefs);
    const double rho = rho_on_nodes(next, c, prefs, floor);
    const double rel = max_relative_change(next, c);
    next.final_metric = rho;
    c = std::move(next);
    if (rho < opts.tol && rel < opts.tol) {
      c.converged = true;
      return c;
    }
  }
  throw NoConvergence("policy iteration hit the cap of " + std::to_string(opts.max_iter) +
                          " iterations (last rho = " + std::to_string(c.final_metric) + ")",
                      c);
}

double euler_residual(const ConsumptionPolicy& policy, const ShockModel& model,
                      const Preferences& prefs, double a, std::size_t z) {
  const double c = policy(a, z);
  if (c >= a) {
    const double m = expected_marginal_value(policy, model, prefs, z, 0.0);
    if (m <= prefs.marginal_utility(a)) return 0.0;
    return 1.0 - prefs.inverse_marginal_utility(m) / c;
  }
  const double m = expected_marginal_value(policy, model, prefs, z, a - c);
  return 1.0 - prefs.inverse_marginal_utility(m) / c;
}

ConsumptionPolicy brute_force_oracle(const ShockModel& model, const Preferences& prefs,
                                     std::size_t horizon, const WealthGrid& grid) {
  std::vector<double> tail;
  try {
    tail = solve_mpc(model, prefs).c_bar;
  } catch (const AssumptionViolation&) {
    tail.clear();
  }
  ConsumptionPolicy c = consume_everything(grid, model.num_states(), std::move(tail));
  for (std::size_t h = 0; h < horizon; ++h) c = time_iteration_step(c, model, prefs);
  return c;
}

}  // namespace ifp
