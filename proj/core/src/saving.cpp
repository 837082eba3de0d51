#include "ifp/saving.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifp/error.hpp"
#include "ifp/shock_model.hpp"

namespace ifp {

namespace {

double pos_part(double x) { return std::max(x, 0.0); }
double neg_part(double x) { return -std::min(x, 0.0); }

}  // namespace

double saving_rate(const SavingRateInputs& in) {
  const double ca = in.c / in.a;
  const double r = in.R_hat - 1.0;
  return 1.0 - (neg_part(r) * (1.0 - ca) + ca) / (pos_part(r) * (1.0 - ca) + in.Y_hat / in.a);
}

double saving_rate_from_levels(const SavingRateInputs& in) {
  const double next = in.R_hat * (in.a - in.c) + in.Y_hat;
  return (next - in.a) / (std::max((in.R_hat - 1.0) * (in.a - in.c), 0.0) + in.Y_hat);
}

AsymptoticSavingRate asymptotic_saving_rate(double c_bar, double R_hat) {
  const double r = R_hat - 1.0;
  const double num = neg_part(r) * (1.0 - c_bar) + c_bar;
  const double den = pos_part(r) * (1.0 - c_bar);
  if (den == 0.0) {
    if (num > 0.0) return {-std::numeric_limits<double>::infinity(), false};
    return {std::numeric_limits<double>::quiet_NaN(), true};
  }
  return {1.0 - num / den, false};
}

BewleyReport bewley_check(double beta, double R, double gamma) {
  if (!(beta * R < 1.0))
    throw PreconditionViolation("stationary Bewley equilibrium requires beta R < 1, got " +
                                std::to_string(beta * R));
  BewleyReport rep;
  const double b = discounted_return_power(beta, R, 1.0 - gamma);
  rep.c_bar = b < 1.0 ? 1.0 - std::pow(b, 1.0 / gamma) : 0.0;
  rep.s_bar = asymptotic_saving_rate(rep.c_bar, R).value;
  rep.s_bar_negative = rep.s_bar < 0.0;
  return rep;
}

BewleyIidReport bewley_check_iid(double beta, std::span<const ReturnAtom> returns, double gamma) {
  double b = 0.0, mean = 0.0, mass = 0.0;
  for (const auto& r : returns) {
    b += r.probability * discounted_return_power(beta, r.ret, 1.0 - gamma);
    mean += r.probability * r.ret;
    mass += r.probability;
  }
  if (returns.empty() || std::abs(mass - 1.0) > 1e-12)
    throw PreconditionViolation("return atom probabilities must sum to 1");
  if (!(b < 1.0))
    throw PreconditionViolation("iid Bewley check requires E beta R^(1-gamma) < 1, got " +
                                std::to_string(b));
  BewleyIidReport rep;
  rep.c_bar = 1.0 - std::pow(b, 1.0 / gamma);
  rep.mean_return = mean;
  rep.stationarity_lhs = mean * (1.0 - rep.c_bar);
  if (rep.stationarity_lhs > 1.0 + 1e-12)
    throw PreconditionViolation("stationarity requires E R (1 - c_bar) <= 1, got " +
                                std::to_string(rep.stationarity_lhs));
  rep.s_bar = asymptotic_saving_rate(rep.c_bar, mean).value;
  rep.s_bar_nonpositive = rep.s_bar <= 1e-12;
  return rep;
}

}  // namespace ifp
