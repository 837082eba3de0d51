#include "ifp/shock_model.hpp"

#include <cmath>
#include <sstream>

#include "ifp/error.hpp"
#include "ifp/spectral.hpp"

namespace ifp {

namespace {

constexpr double kSumTol = 1e-12;

std::string pair_name(std::size_t z, std::size_t zh) {
  std::ostringstream os;
  os << "(" << z << "," << zh << ")";
  return os.str();
}

double sequential_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Rescales v to unit sum unless it is already within 1e-14 of it. A single
// division lands well inside that band, so rebuilding a model from its own
// tables leaves probabilities bitwise equal.
void normalize_exact(std::vector<double>& v) {
  const double s = sequential_sum(v);
  if (std::abs(s - 1.0) <= 1e-14) return;
  for (double& x : v) x /= s;
}

}  // namespace

double Preferences::marginal_utility(double c) const {
  if (c <= 0.0) return kInf;
  return std::pow(c, -gamma);
}

double Preferences::inverse_marginal_utility(double m) const {
  if (m <= 0.0) return kInf;
  if (std::isinf(m)) return 0.0;
  return std::pow(m, -1.0 / gamma);
}

Preferences make_preferences(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ModelValidation("risk aversion gamma must be finite and positive");
  return Preferences{gamma};
}

ShockModel::ShockModel(ExtendedMatrix transition, AtomTable atoms, std::vector<std::string> labels)
    : transition_(std::move(transition)), atoms_(std::move(atoms)), labels_(std::move(labels)) {
  const std::size_t n = transition_.dim();
  if (n == 0) throw ModelValidation("model must have at least one state");
  if (atoms_.size() != n * n)
    throw ModelValidation("atom table must have one entry per ordered state pair");
  if (labels_.empty()) {
    for (std::size_t z = 0; z < n; ++z) labels_.push_back(std::to_string(z));
  } else if (labels_.size() != n) {
    throw ModelValidation("number of state labels does not match P");
  }

  for (std::size_t z = 0; z < n; ++z) {
    double row = 0.0;
    for (std::size_t zh = 0; zh < n; ++zh) {
      const double p = transition_(z, zh);
      if (!std::isfinite(p) || p < 0.0)
        throw ModelValidation("P" + pair_name(z, zh) + " must be a finite nonnegative number");
      row += p;
    }
    if (std::abs(row - 1.0) > kSumTol)
      throw ModelValidation("row " + std::to_string(z) + " of P sums to " + std::to_string(row));
    std::vector<double> r(transition_.row(z).begin(), transition_.row(z).end());
    normalize_exact(r);
    for (std::size_t zh = 0; zh < n; ++zh) transition_(z, zh) = r[zh];
  }

  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t zh = 0; zh < n; ++zh) {
      auto& list = atoms_[z * n + zh];
      if (list.empty()) {
        if (transition_(z, zh) > 0.0)
          throw ModelValidation("pair " + pair_name(z, zh) + " has P > 0 but no atoms");
        continue;
      }
      double total = 0.0;
      for (const auto& a : list) {
        if (!(a.probability > 0.0) || a.probability > 1.0)
          throw ModelValidation("atom probability must lie in (0, 1] for pair " + pair_name(z, zh));
        if (!(a.beta >= 0.0) || !(a.ret >= 0.0) || !(a.income >= 0.0) || !std::isfinite(a.beta) ||
            !std::isfinite(a.ret) || !std::isfinite(a.income))
          throw ModelValidation("atom beta, R, Y must be finite and nonnegative for pair " +
                                pair_name(z, zh));
        total += a.probability;
      }
      if (std::abs(total - 1.0) > kSumTol)
        throw ModelValidation("atom probabilities for pair " + pair_name(z, zh) + " sum to " +
                              std::to_string(total));
      std::vector<double> probs;
      for (const auto& a : list) probs.push_back(a.probability);
      normalize_exact(probs);
      for (std::size_t k = 0; k < list.size(); ++k) list[k].probability = probs[k];
    }
  }
}

ShockModel ShockModel::merged() const {
  AtomTable out(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    for (const auto& a : atoms_[k]) {
      bool found = false;
      for (auto& b : out[k]) {
        if (b.beta == a.beta && b.ret == a.ret && b.income == a.income) {
          b.probability += a.probability;
          found = true;
          break;
        }
      }
      if (!found) out[k].push_back(a);
    }
  }
  return ShockModel(transition_, std::move(out), labels_);
}

double discounted_return_power(double beta, double ret, double theta) {
  if (theta == 0.0) return beta;
  if (beta == 0.0 || ret == 0.0) return 0.0;
  const double v = beta * std::pow(ret, theta);
  return std::isfinite(v) ? v : kInf;
}

ExtendedMatrix k_matrix(const ShockModel& model, double theta) {
  const std::size_t n = model.num_states();
  ExtendedMatrix k(n);
  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t zh = 0; zh < n; ++zh) {
      const double p = model.transition()(z, zh);
      if (p == 0.0) continue;
      double e = 0.0;
      for (const auto& a : model.atoms(z, zh))
        e += mul_ext(a.probability, discounted_return_power(a.beta, a.ret, theta));
      k(z, zh) = mul_ext(p, e);
    }
  }
  return k;
}

ShockModel detrend(const ShockModel& model, double g, double gamma) {
  const double beta_factor = std::exp((1.0 - gamma) * g);
  const double ret_factor = std::exp(-g);
  ShockModel::AtomTable t = model.atom_table();
  for (auto& list : t) {
    for (auto& a : list) {
      a.beta *= beta_factor;
      a.ret *= ret_factor;
    }
  }
  return ShockModel(model.transition(), std::move(t), model.labels());
}

AssumptionReport check_assumptions(const ShockModel& model, const Preferences& prefs) {
  AssumptionReport rep;
  const ExtendedMatrix k0 = k_matrix(model, 0.0);
  const ExtendedMatrix k1 = k_matrix(model, 1.0);
  rep.k0_finite = k0.all_finite();
  rep.k1_finite = k1.all_finite();
  rep.r_k0 = rep.k0_finite ? spectral_radius(k0) : kInf;
  rep.r_k1 = rep.k1_finite ? spectral_radius(k1) : kInf;
  rep.r_k0_below_one = rep.r_k0 < 1.0;
  rep.r_k1_below_one = rep.r_k1 < 1.0;

  const std::size_t n = model.num_states();
  for (std::size_t z = 0; z < n; ++z) {
    for (std::size_t zh = 0; zh < n; ++zh) {
      const auto atoms = model.atoms(z, zh);
      if (atoms.empty()) continue;
      PairCheck pc{z, zh};
      for (const auto& a : atoms) {
        const double mu = prefs.marginal_utility(a.income);
        if (!std::isfinite(a.income)) pc.mean_income_finite = false;
        if (!std::isfinite(mu)) pc.marginal_utility_finite = false;
        if (!std::isfinite(mul_ext(a.beta * a.ret, mu))) pc.discounted_marginal_utility_finite = false;
      }
      if (!pc.mean_income_finite || !pc.marginal_utility_finite ||
          !pc.discounted_marginal_utility_finite)
        rep.income_conditions_hold = false;
      rep.pairs.push_back(pc);
    }
  }
  rep.passed = rep.k0_finite && rep.k1_finite && rep.r_k0_below_one && rep.r_k1_below_one &&
               rep.income_conditions_hold;
  return rep;
}

}  // namespace ifp
