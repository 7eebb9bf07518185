#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bsrd/log_mean.hpp"

namespace bsrd {

/// Surface reaction  alpha U <-> beta V  with mass-action rate k (u^alpha - kappa v^beta).
struct Kinetics {
  double k = 1.0;
  double kappa = 1.0;
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(k > 0.0)) throw std::invalid_argument("kinetics: k must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("kinetics: kappa must be > 0");
    if (!(alpha >= 1.0)) throw std::invalid_argument("kinetics: alpha must be >= 1");
    if (!(beta >= 1.0)) throw std::invalid_argument("kinetics: beta must be >= 1");
  }
};

/// Constants (u*, v*) solving the detailed-balance and mass constraints for mass m.
struct Equilibrium {
  double u_star = 1.0;
  double v_star = 1.0;
  double mass = 0.0;
};

/// Rate with a nonpositive concentration is 0; fractional powers of negative
/// numbers are never formed.
inline double safe_rate(double u, double v, const Kinetics& kin) {
  if (!(u > 0.0) || !(v > 0.0)) return 0.0;
  return kin.k * (std::pow(u, kin.alpha) - kin.kappa * std::pow(v, kin.beta));
}

inline double safe_rate(double u, double v, const Kinetics& kin, const Equilibrium& /*eq*/) {
  return safe_rate(u, v, kin);
}

/// k (u^alpha - kappa v^beta) on the closed positive quadrant; negative
/// arguments fall back to safe_rate.
inline double rate(double u, double v, const Kinetics& kin) {
  if (u < 0.0 || v < 0.0) return safe_rate(u, v, kin);
  return kin.k * (std::pow(u, kin.alpha) - kin.kappa * std::pow(v, kin.beta));
}

/// Gradient of safe_rate; zero wherever safe_rate is identically zero.
struct RateGradient {
  double du = 0.0;
  double dv = 0.0;
};

inline RateGradient safe_rate_gradient(double u, double v, const Kinetics& kin) {
  if (!(u > 0.0) || !(v > 0.0)) return {};
  return {kin.k * kin.alpha * std::pow(u, kin.alpha - 1.0),
          -kin.k * kin.kappa * kin.beta * std::pow(v, kin.beta - 1.0)};
}

/// ln(u*^alpha / (kappa v*^beta)); zero for an exact equilibrium.
inline double detailed_balance_defect(const Kinetics& kin, const Equilibrium& eq) {
  return std::log(std::pow(eq.u_star, kin.alpha) / (kin.kappa * std::pow(eq.v_star, kin.beta)));
}

/// Chemical potential difference alpha ln(u/u*) - beta ln(v/v*), u, v > 0.
/// Evaluated as ln(u^alpha / (kappa v^beta)) minus the detailed-balance defect,
/// which is algebraically identical and avoids cancelling two large logarithms.
inline double potential_difference(double u, double v, const Kinetics& kin, const Equilibrium& eq) {
  const double a = std::pow(u, kin.alpha);
  const double b = kin.kappa * std::pow(v, kin.beta);
  return std::log(a / b) - detailed_balance_defect(kin, eq);
}

/// k Λ(u^alpha, kappa v^beta) (alpha ln(u/u*) - beta ln(v/v*)).
inline double rate_potential_form(double u, double v, const Kinetics& kin, const Equilibrium& eq) {
  if (!(u > 0.0) || !(v > 0.0))
    throw std::domain_error("rate_potential_form: concentrations must be positive");
  const double a = std::pow(u, kin.alpha);
  const double b = kin.kappa * std::pow(v, kin.beta);
  return kin.k * log_mean(a, b) * potential_difference(u, v, kin, eq);
}

}  // namespace bsrd
