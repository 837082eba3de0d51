#include <random>

#include <benchmark/benchmark.h>

#include "ifp/asymptotic_mpc.hpp"
#include "ifp/calibration.hpp"
#include "ifp/policy_solver.hpp"
#include "ifp/spectral.hpp"
#include "ifp/wealth_dist.hpp"

namespace {

ifp::ShockModel calibrated(double gamma) {
  ifp::CalibrationParams p = ifp::default_params();
  p.gamma = gamma;
  return ifp::build_calibrated_model(p);
}

ifp::ExtendedMatrix random_positive(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ifp::ExtendedMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng) < 0.2 ? u(rng) : 0.0;
  return m;
}

void BM_SpectralRadiusCalibrated(benchmark::State& state) {
  const ifp::ExtendedMatrix k = ifp::k_matrix(calibrated(2.0), -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ifp::spectral_radius(k));
}
BENCHMARK(BM_SpectralRadiusCalibrated);

void BM_SpectralRadiusSparse(benchmark::State& state) {
  const ifp::ExtendedMatrix m = random_positive(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ifp::spectral_radius(m));
}
BENCHMARK(BM_SpectralRadiusSparse)->Arg(10)->Arg(50)->Arg(200);

void BM_SolveMpc(benchmark::State& state) {
  const ifp::ShockModel m = calibrated(2.0);
  const ifp::Preferences prefs = ifp::make_preferences(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ifp::solve_mpc(m, prefs));
}
BENCHMARK(BM_SolveMpc)->Unit(benchmark::kMillisecond);

void BM_TimeIterationStep(benchmark::State& state) {
  const ifp::ShockModel m = calibrated(2.0);
  const ifp::Preferences prefs = ifp::make_preferences(2.0);
  const auto grid = ifp::WealthGrid::affine_exponential(static_cast<std::size_t>(state.range(0)), 1e15);
  const ifp::ConsumptionPolicy c0 = ifp::consume_everything(grid, 3, ifp::solve_mpc(m, prefs).c_bar);
  const ifp::ConsumptionPolicy c = ifp::time_iteration_step(c0, m, prefs);
  for (auto _ : state) benchmark::DoNotOptimize(ifp::time_iteration_step(c, m, prefs));
}
BENCHMARK(BM_TimeIterationStep)->Arg(100)->Arg(300)->Unit(benchmark::kMicrosecond);

void BM_SimulatePanel(benchmark::State& state) {
  const ifp::ShockModel m = calibrated(2.0);
  const ifp::ConsumptionPolicy c =
      ifp::solve_policy(m, ifp::make_preferences(2.0), ifp::WealthGrid::affine_exponential(100, 1e4));
  ifp::PanelConfig cfg;
  cfg.num_households = 1000;
  cfg.periods = 600;
  cfg.burn_in = 300;
  cfg.record_thinning = 60;
  for (auto _ : state) benchmark::DoNotOptimize(ifp::simulate_panel(m, c, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.num_households * cfg.periods));
}
BENCHMARK(BM_SimulatePanel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
