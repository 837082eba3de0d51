#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "ifp/error.hpp"
#include "ifp/policy_solver.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int fail(int code, const std::string& error, const std::string& message) {
  nlohmann::json j = {{"error", error}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using ifp::cli::Settings;
  Settings s;
  double gamma = 0.0;

  CLI::App app{"Income fluctuation problem toolkit: asymptotic MPCs, policies, wealth tails"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", IFP_TOOL_VERSION);

  app.add_option("--config", s.config_path, "Model JSON file (replaces the scenario)")->check(CLI::ExistingFile);
  app.add_option("--scenario", s.scenario, "Built-in scenario")->capture_default_str();
  auto* gamma_opt = app.add_option("--gamma", gamma, "Relative risk aversion");
  app.add_option("--delta", s.delta, "Annual discount rate (scenario only)")->capture_default_str();
  app.add_option("--tol", s.tol, "Policy iteration tolerance")->capture_default_str();
  app.add_option("--max-iter", s.max_iter, "Policy iteration cap")->capture_default_str();
  app.add_option("--grid-size", s.grid_size, "Wealth grid points")->capture_default_str();
  app.add_option("--grid-max", s.grid_max, "Largest wealth grid point")->capture_default_str();
  app.add_option("--households", s.panel.num_households, "Simulated households")->capture_default_str();
  app.add_option("--periods", s.panel.periods, "Simulated periods")->capture_default_str();
  app.add_option("--burn-in", s.panel.burn_in, "Periods discarded before recording")->capture_default_str();
  app.add_option("--thinning", s.panel.record_thinning, "Periods between recorded cross-sections")
      ->capture_default_str();
  app.add_option("--seed", s.panel.seed, "Random seed")->capture_default_str();
  app.add_option("--workers", s.panel.workers, "Simulation threads (output does not depend on it)")
      ->capture_default_str();
  app.add_option("--gamma-min", s.gamma_min, "Smallest gamma for regime curves")->capture_default_str();
  app.add_option("--gamma-max", s.gamma_max, "Largest gamma for regime curves")->capture_default_str();
  app.add_option("--gamma-points", s.gamma_points, "Number of gammas for regime curves")->capture_default_str();
  app.add_option("--output", s.output, "Output directory")->capture_default_str();
  app.add_flag("--dump-model", s.dump_model, "Also write the resolved model as JSON");

  const std::map<std::string, std::pair<std::string, std::function<nlohmann::json(const Settings&)>>> commands{
      {"check", {"Existence and ergodicity conditions", ifp::cli::run_check}},
      {"mpc", {"Asymptotic MPCs and their regimes", ifp::cli::run_mpc}},
      {"regime", {"Discount-rate boundaries of the MPC regimes over gamma", ifp::cli::run_regime}},
      {"solve", {"Consumption policy by time iteration", ifp::cli::run_solve}},
      {"saving", {"Saving-rate profiles along the median-return slice", ifp::cli::run_saving}},
      {"simulate", {"Panel simulation and wealth tail", ifp::cli::run_simulate}},
      {"pareto", {"Pareto exponent of the stationary wealth distribution", ifp::cli::run_pareto}},
      {"reproduce", {"Full pipeline for gamma 2 and 4", ifp::cli::run_reproduce}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitValidation, "UsageError", e.what());
  }
  if (*gamma_opt) s.gamma = gamma;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    std::cout << commands.at(name).second(s).dump(2) << "\n";
  } catch (const ifp::Error& e) {
    return fail(e.kind() == ifp::ErrorKind::Validation ? kExitValidation : kExitNumerical, e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(kExitValidation, "Error", e.what());
  }
  return 0;
}
