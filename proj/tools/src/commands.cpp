#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ifp/asymptotic_mpc.hpp"
#include "ifp/calibration.hpp"
#include "ifp/error.hpp"
#include "ifp/model_io.hpp"
#include "ifp/policy_solver.hpp"
#include "ifp/saving.hpp"
#include "ifp/shock_model.hpp"
#include "output.hpp"

namespace ifp::cli {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Scenario {
  ShockModel model;  ///< detrended
  ShockModel raw;
  double gamma;
  std::optional<double> g;
  json metadata;
};

json scenario_metadata(const CalibrationParams& p) {
  return {
      {"scenario", "paper-sec3"},
      {"delta_annual", p.delta_annual},
      {"death_prob", p.death_prob},
      {"death_prob_reading", "1 - exp(-1/300): 25-year expected tenure as a Poisson rate"},
      {"death_prob_alternative", 1.0 / 300.0},
      {"transition_matrix", "printed rows renormalized to sum to one"},
  };
}

void require_scenario(const Settings& s) {
  if (s.scenario != "paper-sec3") throw ParamValidation("unknown scenario '" + s.scenario + "'");
}

Scenario calibrated(const Settings& s, double gamma) {
  require_scenario(s);
  CalibrationParams p = default_params();
  p.gamma = gamma;
  p.delta_annual = s.delta;
  return {build_calibrated_model(p), build_raw_model(p), gamma, p.g_monthly, scenario_metadata(p)};
}

Scenario resolve(const Settings& s) {
  if (s.config_path.empty()) return calibrated(s, s.gamma.value_or(2.0));
  const ModelFile f = load_model_file(s.config_path);
  json meta = json::parse(f.metadata_json);
  meta["source"] = s.config_path;
  const double gamma = s.gamma.value_or(f.gamma);
  ShockModel model = f.g && gamma != f.gamma ? detrend(f.raw_model, *f.g, gamma) : f.model;
  return {std::move(model), f.raw_model, gamma, f.g, std::move(meta)};
}

json solver_config(const Settings& s) {
  return {{"tol", s.tol}, {"max_iter", s.max_iter}, {"grid_size", s.grid_size}, {"grid_max", s.grid_max}};
}

json panel_config(const Settings& s) {
  return {{"households", s.panel.num_households}, {"periods", s.panel.periods},
          {"burn_in", s.panel.burn_in}, {"thinning", s.panel.record_thinning}};
}

// Everything that can change an output. Worker count is left out since it
// cannot.
json resolved_config(const std::string& command, const Settings& s, const std::vector<Scenario>& scenarios) {
  json c;
  c["command"] = command;
  if (s.config_path.empty()) {
    c["scenario"] = s.scenario;
    c["delta"] = s.delta;
  } else {
    c["config"] = s.config_path;
  }
  c["models"] = json::array();
  for (const auto& sc : scenarios)
    c["models"].push_back(json::parse(dump_model_json(sc.raw, sc.gamma, sc.g, sc.metadata.dump())));
  c["solver"] = solver_config(s);
  c["panel"] = panel_config(s);
  c["seed"] = s.panel.seed;
  c["regime_grid"] = {{"gamma_min", s.gamma_min}, {"gamma_max", s.gamma_max}, {"points", s.gamma_points}};
  return c;
}

void maybe_dump(const Settings& s, OutputDir& out, const Scenario& sc, const std::string& name = "model.json") {
  if (s.dump_model) out.write(name, dump_model_json(sc.raw, sc.gamma, sc.g, sc.metadata.dump()) + "\n");
}

void finish(const std::string& command, const Settings& s, OutputDir& out, const std::vector<Scenario>& scs) {
  out.write_manifest(command, resolved_config(command, s, scs), s.panel.seed);
}

const char* regime_name(MpcRegime r) { return r == MpcRegime::Positive ? "positive" : "zero"; }

std::string state_label(const ShockModel& m, std::size_t z) {
  return z < m.labels().size() && !m.labels()[z].empty() ? m.labels()[z] : std::to_string(z);
}

json mpc_report(const ShockModel& m, const MpcResult& r) {
  json states = json::array();
  for (std::size_t z = 0; z < m.num_states(); ++z)
    states.push_back({{"state", state_label(m, z)},
                      {"c_bar", num(r.c_bar[z])},
                      {"x_star", num(r.x_star[z])},
                      {"regime", regime_name(r.regime[z])}});
  return {{"states", states},
          {"r_k0", num(r.r_k0)},
          {"r_k1", num(r.r_k1)},
          {"r_k1_minus_gamma", num(r.r_k1mg)},
          {"boundary_proximity", num(r.boundary_proximity)},
          {"iterations", r.iterations_used},
          {"iteration_converged", r.iteration_converged},
          {"converged_analytically", r.converged_analytically}};
}

ConsumptionPolicy solve(const Settings& s, const Scenario& sc) {
  SolveOptions opts;
  opts.tol = s.tol;
  opts.max_iter = s.max_iter;
  return solve_policy(sc.model, make_preferences(sc.gamma), WealthGrid::affine_exponential(s.grid_size, s.grid_max),
                      opts);
}

json policy_report(const ConsumptionPolicy& c) {
  return {{"iterations", c.iterations},
          {"final_metric", num(c.final_metric)},
          {"converged", c.converged},
          {"c_bar", nums(c.tail_slope)},
          {"grid_size", c.grid.size()},
          {"grid_max", c.grid.a_max()}};
}

// Rows (a, z, c, c/a) over positive grid nodes, optionally prefixed by gamma.
std::vector<std::vector<double>> policy_rows(const ConsumptionPolicy& c, std::optional<double> gamma) {
  std::vector<std::vector<double>> rows;
  for (std::size_t z = 0; z < c.num_states(); ++z)
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const double a = c.grid[i];
      if (a <= 0.0) continue;
      std::vector<double> row{a, static_cast<double>(z), c.values[z][i], c.values[z][i] / a};
      if (gamma) row.insert(row.begin(), *gamma);
      rows.push_back(std::move(row));
    }
  return rows;
}

// The atom of pair (z, z) at the probability-weighted median return, i.e.
// staying in z with a median return draw.
std::optional<ShockAtom> median_return_atom(const ShockModel& m, std::size_t z) {
  auto atoms = std::vector<ShockAtom>(m.atoms(z, z).begin(), m.atoms(z, z).end());
  if (atoms.empty() || !(m.transition()(z, z) > 0.0)) return std::nullopt;
  std::stable_sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) { return x.ret < y.ret; });
  double mass = 0.0;
  for (const auto& a : atoms) {
    mass += a.probability;
    if (mass >= 0.5) return a;
  }
  return atoms.back();
}

struct SavingSlice {
  std::vector<std::vector<double>> rows;  ///< (a, z, saving_rate)
  json report = json::array();
};

SavingSlice saving_slice(const ShockModel& m, const ConsumptionPolicy& c) {
  SavingSlice out;
  for (std::size_t z = 0; z < m.num_states(); ++z) {
    const auto atom = median_return_atom(m, z);
    if (!atom) continue;
    const double c_bar = z < c.tail_slope.size() ? c.tail_slope[z] : 0.0;
    const AsymptoticSavingRate lim = asymptotic_saving_rate(c_bar, atom->ret);
    out.report.push_back({{"state", state_label(m, z)},
                          {"R_hat", atom->ret},
                          {"Y_hat", atom->income},
                          {"c_bar", num(c_bar)},
                          {"s_bar", num(lim.value)},
                          {"indeterminate", lim.indeterminate}});
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      const double a = c.grid[i];
      if (a <= 0.0) continue;
      out.rows.push_back({a, static_cast<double>(z), saving_rate({a, c.values[z][i], atom->ret, atom->income})});
    }
  }
  return out;
}

struct TailSummary {
  json report;
  double alpha = kNaN;
};

TailSummary tail_summary(const ShockModel& m, const MpcResult& mpc, const TailTable& t) {
  json r;
  TailSummary out;
  r["ergodicity_radius"] = num(ergodicity_check(m).radius);
  try {
    out.alpha = pareto_exponent(m, mpc.c_bar).alpha;
    r["alpha"] = out.alpha;
  } catch (const NoRoot& e) {
    r["alpha"] = nullptr;
    r["alpha_note"] = e.what();
  }
  try {
    r["tail_slope_top_two_decades"] = top_tail_slope(t, 2.0);
  } catch (const InsufficientTail& e) {
    r["tail_slope_top_two_decades"] = nullptr;
    r["tail_slope_note"] = e.what();
  }
  r["samples"] = t.samples;
  r["mean_log_wealth"] = nums(t.mean_log_wealth);
  out.report = std::move(r);
  return out;
}

// Pr(wealth > a) with an analytic power-law line through the threshold two
// decades below the top of the simulated tail.
std::vector<std::vector<double>> tail_rows(const TailTable& t, double alpha, std::optional<double> gamma) {
  double top = 0.0;
  for (std::size_t i = 0; i < t.thresholds.size(); ++i)
    if (t.tail_probability[i] > 0.0) top = t.thresholds[i];
  double anchor = kNaN, anchor_p = kNaN;
  for (std::size_t i = 0; i < t.thresholds.size(); ++i)
    if (t.thresholds[i] >= top / 100.0 * (1.0 - 1e-9) && t.tail_probability[i] > 0.0) {
      anchor = t.thresholds[i];
      anchor_p = t.tail_probability[i];
      break;
    }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
    const double line = anchor_p * std::pow(t.thresholds[i] / anchor, -alpha);
    std::vector<double> row{t.thresholds[i], t.tail_probability[i], line};
    if (gamma) row.insert(row.begin(), *gamma);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> gamma_grid(const Settings& s) {
  if (s.gamma_points < 1 || !(s.gamma_min > 0.0) || s.gamma_max < s.gamma_min)
    throw ParamValidation("gamma grid needs points >= 1 and 0 < gamma-min <= gamma-max");
  std::vector<double> g;
  for (std::size_t i = 0; i < s.gamma_points; ++i)
    g.push_back(s.gamma_points == 1 ? s.gamma_min
                                    : s.gamma_min + (s.gamma_max - s.gamma_min) * static_cast<double>(i) /
                                                        static_cast<double>(s.gamma_points - 1));
  return g;
}

std::vector<std::vector<double>> regime_rows(const Settings& s) {
  require_scenario(s);
  const ModelTemplate make = [](double delta, double gamma) {
    CalibrationParams p = default_params();
    p.delta_annual = delta;
    p.gamma = gamma;
    return build_calibrated_model(p);
  };
  const std::vector<double> grid = gamma_grid(s);
  std::vector<std::vector<double>> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rows[i].push_back(grid[i]);
  for (RadiusTarget target : {RadiusTarget::K0, RadiusTarget::K1, RadiusTarget::K1MinusGamma}) {
    const auto points = regime_boundary(make, grid, target);
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i].push_back(points[i].delta.value_or(kNaN));
  }
  return rows;
}

const std::vector<std::string> kRegimeHeader{"gamma", "delta_rK0", "delta_rK1", "delta_rK1mg"};

}  // namespace

json run_check(const Settings& s) {
  const Scenario sc = resolve(s);
  const AssumptionReport a = check_assumptions(sc.model, make_preferences(sc.gamma));
  const ErgodicityResult e = ergodicity_check(sc.model);
  json pairs = json::array();
  for (const auto& p : a.pairs)
    if (!p.mean_income_finite || !p.marginal_utility_finite || !p.discounted_marginal_utility_finite)
      pairs.push_back({{"from", p.from}, {"to", p.to}});
  json r = {{"gamma", sc.gamma},
            {"r_k0", num(a.r_k0)},
            {"r_k1", num(a.r_k1)},
            {"r_k0_below_one", a.r_k0_below_one},
            {"r_k1_below_one", a.r_k1_below_one},
            {"income_conditions_hold", a.income_conditions_hold},
            {"failing_income_pairs", pairs},
            {"assumptions_pass", a.passed},
            {"note", a.note},
            {"ergodicity_radius", num(e.radius)},
            {"ergodicity_pass", e.pass},
            {"pass", a.passed && e.pass}};
  OutputDir out(s.output);
  out.write_json("check.json", r);
  maybe_dump(s, out, sc);
  finish("check", s, out, {sc});
  return r;
}

json run_mpc(const Settings& s) {
  const Scenario sc = resolve(s);
  json r = mpc_report(sc.model, solve_mpc(sc.model, make_preferences(sc.gamma)));
  r["gamma"] = sc.gamma;
  OutputDir out(s.output);
  out.write_json("mpc.json", r);
  maybe_dump(s, out, sc);
  finish("mpc", s, out, {sc});
  return r;
}

json run_regime(const Settings& s) {
  if (!s.config_path.empty()) throw ParamValidation("regime needs a scenario, not a model file");
  OutputDir out(s.output);
  out.write("regime.csv", csv(kRegimeHeader, regime_rows(s)));
  finish("regime", s, out, {});
  return {{"outputs", out.outputs()}};
}

json run_solve(const Settings& s) {
  const Scenario sc = resolve(s);
  const ConsumptionPolicy c = solve(s, sc);
  json r = policy_report(c);
  r["gamma"] = sc.gamma;
  OutputDir out(s.output);
  out.write("policy.csv", csv({"a", "state", "c", "c_over_a"}, policy_rows(c, std::nullopt)));
  out.write_json("solve.json", r);
  maybe_dump(s, out, sc);
  finish("solve", s, out, {sc});
  return r;
}

json run_saving(const Settings& s) {
  const Scenario sc = resolve(s);
  const ConsumptionPolicy c = solve(s, sc);
  SavingSlice slice = saving_slice(sc.model, c);
  json r = {{"gamma", sc.gamma}, {"states", slice.report}, {"policy", policy_report(c)}};
  OutputDir out(s.output);
  out.write("saving.csv", csv({"a", "state", "saving_rate"}, slice.rows));
  out.write_json("saving.json", r);
  maybe_dump(s, out, sc);
  finish("saving", s, out, {sc});
  return r;
}

json run_simulate(const Settings& s) {
  const Scenario sc = resolve(s);
  const MpcResult mpc = solve_mpc(sc.model, make_preferences(sc.gamma));
  const ConsumptionPolicy c = solve(s, sc);
  const TailTable t = simulate_panel(sc.model, c, s.panel);
  TailSummary summary = tail_summary(sc.model, mpc, t);
  json r = summary.report;
  r["gamma"] = sc.gamma;
  r["policy"] = policy_report(c);
  OutputDir out(s.output);
  out.write("tail.csv", csv({"threshold", "tail_probability", "pareto_line"}, tail_rows(t, summary.alpha, std::nullopt)));
  out.write_json("simulate.json", r);
  maybe_dump(s, out, sc);
  finish("simulate", s, out, {sc});
  return r;
}

json run_pareto(const Settings& s) {
  const Scenario sc = resolve(s);
  const MpcResult mpc = solve_mpc(sc.model, make_preferences(sc.gamma));
  const ParetoResult p = pareto_exponent(sc.model, mpc.c_bar);
  json r = {{"gamma", sc.gamma},
            {"alpha", p.alpha},
            {"bracket_lo", p.bracket_lo},
            {"bracket_hi", p.bracket_hi},
            {"residual", p.residual},
            {"c_bar", nums(mpc.c_bar)},
            {"ergodicity_radius", num(ergodicity_check(sc.model).radius)}};
  OutputDir out(s.output);
  out.write_json("pareto.json", r);
  maybe_dump(s, out, sc);
  finish("pareto", s, out, {sc});
  return r;
}

json run_reproduce(const Settings& s) {
  if (!s.config_path.empty()) throw ParamValidation("reproduce runs the built-in scenario only");
  OutputDir out(s.output);
  std::vector<std::vector<double>> consumption, mpc_rows, saving_rows, tail;
  std::vector<Scenario> scenarios;
  json summary;
  for (double gamma : {2.0, 4.0}) {
    const Scenario sc = calibrated(s, gamma);
    const MpcResult mpc = solve_mpc(sc.model, make_preferences(gamma));
    const ConsumptionPolicy c = solve(s, sc);
    for (auto row : policy_rows(c, gamma)) {
      const std::size_t z = static_cast<std::size_t>(row[2]);
      consumption.push_back({row[0], row[1], row[2], row[3]});
      mpc_rows.push_back({row[0], row[1], row[2], row[4], mpc.c_bar[z]});
    }
    SavingSlice slice = saving_slice(sc.model, c);
    for (auto& row : slice.rows) {
      row.insert(row.begin(), gamma);
      saving_rows.push_back(std::move(row));
    }
    const TailTable t = simulate_panel(sc.model, c, s.panel);
    TailSummary ts = tail_summary(sc.model, mpc, t);
    for (auto& row : tail_rows(t, ts.alpha, gamma)) tail.push_back(std::move(row));

    const std::string key = "gamma_" + fmt17(gamma);
    summary["ergodicity_radius"] = ts.report["ergodicity_radius"];
    summary[key] = {{"mpc", mpc_report(sc.model, mpc)},
                    {"alpha", ts.report["alpha"]},
                    {"tail_slope_top_two_decades", ts.report["tail_slope_top_two_decades"]},
                    {"saving", slice.report},
                    {"policy", policy_report(c)}};
    summary["c_bar"][key] = nums(mpc.c_bar);
    summary["alpha"][key] = ts.report["alpha"];
    maybe_dump(s, out, sc, "model_" + key + ".json");
    scenarios.push_back(sc);
  }
  out.write("figure1_regime.csv", csv(kRegimeHeader, regime_rows(s)));
  out.write("figure2_consumption.csv", csv({"gamma", "a", "state", "c"}, consumption));
  out.write("figure3_mpc.csv", csv({"gamma", "a", "state", "c_over_a", "c_bar"}, mpc_rows));
  out.write("figure4_saving.csv", csv({"gamma", "a", "state", "saving_rate"}, saving_rows));
  out.write("figure5_tail.csv", csv({"gamma", "threshold", "tail_probability", "pareto_line"}, tail));
  out.write_json("summary.json", summary);
  finish("reproduce", s, out, scenarios);
  return summary;
}

}  // namespace ifp::cli
