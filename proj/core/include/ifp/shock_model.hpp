#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ifp/extended_matrix.hpp"

namespace ifp {

/// One realization of (discount factor, gross return, income) for a state
/// transition, with its conditional probability.
struct ShockAtom {
  double probability = 1.0;
  double beta = 0.0;
  double ret = 0.0;
  double income = 0.0;

  friend bool operator==(const ShockAtom&, const ShockAtom&) = default;
};

/// CRRA preferences, u'(c) = c^(-gamma).
struct Preferences {
  double gamma = 1.0;

  double eis() const noexcept { return 1.0 / gamma; }
  /// Marginal utility; +inf at c = 0.
  double marginal_utility(double c) const;
  /// Inverse of marginal utility, m -> m^(-1/gamma).
  double inverse_marginal_utility(double m) const;
};

/// Throws ModelValidation unless gamma is finite and positive.
Preferences make_preferences(double gamma);

/// Finite-state Markov chain with discrete shock atoms attached to every
/// ordered state pair (z, zhat). Immutable after construction.
///
/// The constructor checks row-stochasticity of P and atom probability sums
/// to 1e-12, then renormalizes both exactly. Pairs with P(z, zhat) > 0 must
/// carry at least one atom; pairs with P(z, zhat) = 0 may be empty.
class ShockModel {
 public:
  using AtomTable = std::vector<std::vector<ShockAtom>>;  ///< indexed z * Z + zhat

  ShockModel(ExtendedMatrix transition, AtomTable atoms, std::vector<std::string> labels = {});

  std::size_t num_states() const noexcept { return transition_.dim(); }
  const ExtendedMatrix& transition() const noexcept { return transition_; }
  std::span<const ShockAtom> atoms(std::size_t z, std::size_t zhat) const {
    return atoms_[z * num_states() + zhat];
  }
  const AtomTable& atom_table() const noexcept { return atoms_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Same model with atoms sharing identical (beta, ret, income) merged and
  /// their probabilities added. Atom order follows first occurrence.
  ShockModel merged() const;

  /// Copy with every income replaced by f(z, zhat, atom). Used to exercise
  /// income irrelevance of the asymptotic MPCs.
  template <class F>
  ShockModel with_incomes(F&& f) const {
    AtomTable t = atoms_;
    const std::size_t n = num_states();
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t zh = 0; zh < n; ++zh)
        for (auto& a : t[z * n + zh]) a.income = f(z, zh, a);
    return ShockModel(transition_, std::move(t), labels_);
  }

  friend bool operator==(const ShockModel&, const ShockModel&) = default;

 private:
  ExtendedMatrix transition_;
  AtomTable atoms_;
  std::vector<std::string> labels_;
};

/// beta * R^theta for one atom under the convention beta R^theta =
/// (beta R) R^(theta - 1) and 0 * inf = 0: an atom with R = 0 contributes 0
/// for every theta != 0, and beta for theta = 0.
double discounted_return_power(double beta, double ret, double theta);

/// K(theta)_{z zhat} = P_{z zhat} * E_{z,zhat}[beta R^theta]. Entries that
/// overflow saturate to +inf.
ExtendedMatrix k_matrix(const ShockModel& model, double theta);

/// Removes deterministic growth g from a CRRA model: beta *= e^{(1-gamma) g},
/// R *= e^{-g}; incomes and P are unchanged.
ShockModel detrend(const ShockModel& model, double g, double gamma);

/// Pairwise verdicts of the integrability conditions on incomes.
struct PairCheck {
  std::size_t from = 0;
  std::size_t to = 0;
  bool mean_income_finite = true;
  bool marginal_utility_finite = true;        ///< E u'(Y) < inf
  bool discounted_marginal_utility_finite = true;  ///< E beta R u'(Y) < inf
};

struct AssumptionReport {
  bool k0_finite = false;
  bool k1_finite = false;
  double r_k0 = kInf;  ///< +inf when K(0) has an infinite entry
  double r_k1 = kInf;
  bool r_k0_below_one = false;
  bool r_k1_below_one = false;
  std::vector<PairCheck> pairs;
  bool income_conditions_hold = true;
  bool passed = false;
  std::string note = "income integrability checked on the discretized model only";
};

AssumptionReport check_assumptions(const ShockModel& model, const Preferences& prefs);

}  // namespace ifp
