#pragma once

#include <span>

namespace ifp {

struct SavingRateInputs {
  double a = 1.0;      ///< current wealth, > 0
  double c = 1.0;      ///< consumption in (0, a]
  double R_hat = 1.0;  ///< next-period gross return, >= 0
  double Y_hat = 1.0;  ///< next-period income, > 0
};

/// Change in net worth over income excluding capital losses, written in
/// terms of the consumption rate c/a. Always < 1.
double saving_rate(const SavingRateInputs& in);

/// Same quantity computed directly from the budget constraint:
/// (a' - a) / (max{(R - 1)(a - c), 0} + Y) with a' = R(a - c) + Y.
double saving_rate_from_levels(const SavingRateInputs& in);

struct AsymptoticSavingRate {
  double value = 0.0;          ///< in [-inf, 1]; NaN when indeterminate
  bool indeterminate = false;  ///< R_hat == 1 and c_bar == 0 (0/0)
};

/// Limit of the saving rate as wealth grows, with consumption ~ c_bar * a.
AsymptoticSavingRate asymptotic_saving_rate(double c_bar, double R_hat);

/// Constant-(beta, R, gamma) Bewley economy.
struct BewleyReport {
  double c_bar = 0.0;
  double s_bar = 0.0;
  bool s_bar_negative = false;
};

/// Requires beta * R < 1 (PreconditionViolation otherwise).
BewleyReport bewley_check(double beta, double R, double gamma);

struct ReturnAtom {
  double probability = 1.0;
  double ret = 1.0;
};

/// iid-return variant with constant beta.
struct BewleyIidReport {
  double c_bar = 0.0;
  double mean_return = 0.0;
  double stationarity_lhs = 0.0;  ///< E R (1 - c_bar)
  double s_bar = 0.0;              ///< evaluated at R_hat = E R
  bool s_bar_nonpositive = false;
};

/// Requires E beta R^{1-gamma} < 1 and E R (1 - c_bar) <= 1 (within 1e-12);
/// throws PreconditionViolation otherwise.
BewleyIidReport bewley_check_iid(double beta, std::span<const ReturnAtom> returns, double gamma);

}  // namespace ifp
