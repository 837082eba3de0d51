#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ifp/wealth_dist.hpp"

namespace ifp::cli {

struct Settings {
  std::string config_path;  ///< model JSON; overrides the scenario when set
  std::string scenario = "paper-sec3";
  std::optional<double> gamma;
  double delta = 0.04;
  double tol = 1e-9;
  std::size_t max_iter = 20000;
  std::size_t grid_size = 300;
  double grid_max = 1e15;
  PanelConfig panel;
  double gamma_min = 0.5;
  double gamma_max = 6.0;
  std::size_t gamma_points = 23;
  std::string output = "ifp-output";
  bool dump_model = false;
};

/// Each command writes its files plus manifest.json and returns the report
/// printed on stdout. Library errors propagate.
nlohmann::json run_check(const Settings& s);
nlohmann::json run_mpc(const Settings& s);
nlohmann::json run_regime(const Settings& s);
nlohmann::json run_solve(const Settings& s);
nlohmann::json run_saving(const Settings& s);
nlohmann::json run_simulate(const Settings& s);
nlohmann::json run_pareto(const Settings& s);
nlohmann::json run_reproduce(const Settings& s);

}  // namespace ifp::cli
