#include "ifp/wealth_dist.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ifp/asymptotic_mpc.hpp"
#include "ifp/error.hpp"
#include "ifp/philox.hpp"
#include "ifp/spectral.hpp"

namespace ifp {

namespace {

constexpr double kExplosionLevel = 1e15;
constexpr double kMaxAlpha = 1000.0;
constexpr double kResidualTol = 1e-10;

std::size_t draw_index(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const auto idx = static_cast<std::size_t>(it - cum.begin());
  return std::min(idx, cum.size() - 1);
}

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    c[i] = acc;
  }
  if (!c.empty()) c.back() = 1.0;
  return c;
}

}  // namespace

ExtendedMatrix expected_return_matrix(const ShockModel& model) {
  const std::size_t n = model.num_states();
  ExtendedMatrix g(n);
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t zh = 0; zh < n; ++zh) {
      double e = 0.0;
      for (const auto& a : model.atoms(z, zh)) e += a.probability * a.ret;
      g(z, zh) = e;
    }
  return g;
}

ErgodicityResult ergodicity_check(const ShockModel& model) {
  const double r = spectral_radius(model.transition().hadamard(expected_return_matrix(model)));
  return {r, r < kRegimeThreshold};
}

ExtendedMatrix mgf_matrix(const ShockModel& model, std::span<const double> c_bar, double alpha) {
  const std::size_t n = model.num_states();
  if (c_bar.size() != n) throw PreconditionViolation("c_bar must have one entry per state");
  ExtendedMatrix m(n);
  for (std::size_t z = 0; z < n; ++z) {
    if (!(c_bar[z] >= 0.0 && c_bar[z] <= 1.0))
      throw PreconditionViolation("c_bar entries must lie in [0, 1]");
    for (std::size_t zh = 0; zh < n; ++zh) {
      double e = 0.0;
      for (const auto& a : model.atoms(z, zh))
        e += a.probability * std::pow(a.ret * (1.0 - c_bar[z]), alpha);
      m(z, zh) = std::isfinite(e) ? e : kInf;
    }
  }
  return m;
}

double mgf_radius(const ShockModel& model, std::span<const double> c_bar, double alpha) {
  const ExtendedMatrix pm = model.transition().hadamard(mgf_matrix(model, c_bar, alpha));
  return pm.all_finite() ? spectral_radius(pm) : kInf;
}

ParetoResult pareto_exponent(const ShockModel& model, std::span<const double> c_bar) {
  const ErgodicityResult erg = ergodicity_check(model);
  if (!erg.pass)
    throw PreconditionViolation("ergodicity check failed: r(P o G) = " + std::to_string(erg.radius));
  auto radius = [&](double alpha) { return mgf_radius(model, c_bar, alpha); };

  double lo = 1.0, hi = 1.0;
  double r_hi = radius(hi);
  while (r_hi < 1.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxAlpha) throw NoRoot("r(P o M(alpha)) < 1 for every alpha <= 1000");
    r_hi = radius(hi);
  }

  ParetoResult res;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  double mid = 0.5 * (lo + hi);
  double r_mid = radius(mid);
  for (int it = 0; it < 200 && std::abs(r_mid - 1.0) > kResidualTol; ++it) {
    if (r_mid < 1.0)
      lo = mid;
    else
      hi = mid;
    mid = 0.5 * (lo + hi);
    r_mid = radius(mid);
  }
  res.alpha = mid;
  res.residual = std::abs(r_mid - 1.0);
  return res;
}

TailTable tail_table_from_samples(std::vector<double> samples, std::size_t per_decade) {
  TailTable t;
  std::sort(samples.begin(), samples.end());
  t.samples = samples.size();
  const auto first_pos = std::upper_bound(samples.begin(), samples.end(), 0.0);
  if (first_pos != samples.end()) {
    const double lo_exp = std::floor(std::log10(*first_pos));
    const double hi = samples.back();
    const double n = static_cast<double>(samples.size());
    for (std::size_t k = 0;; ++k) {
      const double thr = std::pow(10.0, lo_exp + static_cast<double>(k) / static_cast<double>(per_decade));
      if (thr > hi) break;
      const auto above = samples.end() - std::upper_bound(samples.begin(), samples.end(), thr);
      t.thresholds.push_back(thr);
      t.tail_probability.push_back(static_cast<double>(above) / n);
    }
  }
  t.pooled_wealth = std::move(samples);
  return t;
}

double tail_slope(const TailTable& table, double log10_lo, double log10_hi) {
  std::vector<double> xs, ys;
  const double lo = std::pow(10.0, log10_lo), hi = std::pow(10.0, log10_hi);
  for (std::size_t i = 0; i < table.thresholds.size(); ++i) {
    const double thr = table.thresholds[i], p = table.tail_probability[i];
    if (thr < lo || thr > hi || !(p > 0.0)) continue;
    xs.push_back(std::log(thr));
    ys.push_back(std::log(p));
  }
  if (xs.size() < 5)
    throw InsufficientTail("need at least 5 thresholds with positive tail probability, got " +
                           std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

double top_tail_slope(const TailTable& table, double decades) {
  double top = 0.0;
  for (std::size_t i = 0; i < table.thresholds.size(); ++i)
    if (table.tail_probability[i] > 0.0) top = table.thresholds[i];
  if (!(top > 0.0)) throw InsufficientTail("tail table has no positive tail probability");
  const double hi = std::log10(top);
  return tail_slope(table, hi - decades - 1e-9, hi + 1e-9);
}

TailTable simulate_panel(const ShockModel& model, const ConsumptionPolicy& policy, const PanelConfig& cfg) {
  if (cfg.num_households == 0 || cfg.periods == 0 || cfg.record_thinning == 0)
    throw PreconditionViolation("households, periods and thinning must be positive");
  if (cfg.burn_in >= cfg.periods) throw PreconditionViolation("burn_in must be below periods");
  if (cfg.periods >= 0xFFFFFFFFu) throw PreconditionViolation("too many periods");
  if (policy.num_states() != model.num_states())
    throw PreconditionViolation("policy and model have different state counts");
  const ErgodicityResult erg = ergodicity_check(model);
  if (!erg.pass)
    throw PreconditionViolation("ergodicity check failed: r(P o G) = " + std::to_string(erg.radius));

  const std::size_t nz = model.num_states();
  std::vector<std::vector<double>> row_cum(nz);
  std::vector<std::vector<double>> atom_cum(nz * nz);
  for (std::size_t z = 0; z < nz; ++z) {
    const auto r = model.transition().row(z);
    row_cum[z] = cumulative(std::vector<double>(r.begin(), r.end()));
    for (std::size_t zh = 0; zh < nz; ++zh) {
      std::vector<double> w;
      for (const auto& a : model.atoms(z, zh)) w.push_back(a.probability);
      atom_cum[z * nz + zh] = cumulative(w);
    }
  }
  const std::vector<double> init_cum = cumulative(stationary_distribution(model.transition()));
  const double a0 = median_income(model);

  const std::size_t n_records = (cfg.periods - cfg.burn_in) / cfg.record_thinning;
  const std::size_t nh = cfg.num_households;
  std::vector<double> records(n_records * nh, 0.0);

  auto run_range = [&](std::size_t h_begin, std::size_t h_end, bool& exploded) {
    for (std::size_t h = h_begin; h < h_end; ++h) {
      const UniformPair init = philox_uniforms(cfg.seed, h, 0);
      std::size_t z = draw_index(init_cum, init.u0);
      double a = a0;
      for (std::size_t t = 1; t <= cfg.periods; ++t) {
        const UniformPair u = philox_uniforms(cfg.seed, h, static_cast<std::uint32_t>(t));
        const std::size_t zh = draw_index(row_cum[z], u.u0);
        const auto atoms = model.atoms(z, zh);
        const ShockAtom& atom = atoms[draw_index(atom_cum[z * nz + zh], u.u1)];
        const double c = std::min(a, policy(a, z));
        a = atom.ret * (a - c) + atom.income;
        z = zh;
        if (!(a <= kExplosionLevel)) {
          exploded = true;
          return;
        }
        if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.record_thinning == 0) {
          const std::size_t rec = (t - cfg.burn_in) / cfg.record_thinning - 1;
          records[rec * nh + h] = a;
        }
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, nh));
  std::vector<char> exploded(workers, 0);
  if (workers == 1) {
    bool e = false;
    run_range(0, nh, e);
    exploded[0] = e;
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (nh + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        bool e = false;
        run_range(w * chunk, std::min(nh, (w + 1) * chunk), e);
        exploded[w] = e;
      });
    }
    for (auto& t : pool) t.join();
  }
  if (std::any_of(exploded.begin(), exploded.end(), [](char e) { return e != 0; }))
    throw ExplosionDetected("household wealth exceeded 1e15");

  std::vector<double> mean_log(n_records, 0.0);
  for (std::size_t r = 0; r < n_records; ++r) {
    double acc = 0.0;
    for (std::size_t h = 0; h < nh; ++h) acc += std::log(records[r * nh + h]);
    mean_log[r] = acc / static_cast<double>(nh);
  }
  TailTable table = tail_table_from_samples(std::move(records));
  table.mean_log_wealth = std::move(mean_log);
  return table;
}

}  // namespace ifp
