#pragma once

#include <cmath>
#include <stdexcept>

#include "bsrd/kinetics.hpp"

namespace bsrd {

namespace detail {

// g(v) = beta |Omega| kappa^{1/alpha} v^{beta/alpha} + alpha |Gamma| v - m, strictly increasing on v > 0.
struct MassBalance {
  double bulk_coef;     // beta |Omega| kappa^{1/alpha}
  double exponent;      // beta / alpha
  double surface_coef;  // alpha |Gamma|
  double mass;

  [[nodiscard]] double operator()(double v) const {
    return bulk_coef * std::pow(v, exponent) + surface_coef * v - mass;
  }
  [[nodiscard]] double derivative(double v) const {
    return bulk_coef * exponent * std::pow(v, exponent - 1.0) + surface_coef;
  }
};

inline MassBalance make_mass_balance(const Kinetics& kin, double mass, double omega, double gamma) {
  return {kin.beta * omega * std::pow(kin.kappa, 1.0 / kin.alpha), kin.beta / kin.alpha, kin.alpha * gamma, mass};
}

}  // namespace detail

/// Solves the mass and detailed-balance constraints starting from the
/// bracket [v_lo, v_hi], which must straddle the root. Bisection to a relative
/// bracket width of 1e-15 followed by a few guarded Newton steps.
inline Equilibrium solve_equilibrium_bracketed(const Kinetics& kin, double mass, double omega_measure,
                                               double gamma_measure, double v_lo, double v_hi) {
  const auto g = detail::make_mass_balance(kin, mass, omega_measure, gamma_measure);
  if (!(g(v_lo) <= 0.0) || !(g(v_hi) >= 0.0))
    throw std::invalid_argument("solve_equilibrium: bracket does not contain the root");

  for (int it = 0; it < 400 && (v_hi - v_lo) > 1e-15 * v_hi; ++it) {
    const double mid = 0.5 * (v_lo + v_hi);
    if (mid <= v_lo || mid >= v_hi) break;
    (g(mid) < 0.0 ? v_lo : v_hi) = mid;
  }
  double v = 0.5 * (v_lo + v_hi);
  for (int it = 0; it < 4; ++it) {
    const double step = g(v) / g.derivative(v);
    const double next = v - step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    if (std::abs(g(next)) >= std::abs(g(v))) break;
    v = next;
  }

  Equilibrium eq;
  eq.v_star = v;
  eq.u_star = std::pow(kin.kappa * std::pow(v, kin.beta), 1.0 / kin.alpha);
  eq.mass = mass;
  return eq;
}

/// Unique positive (u*, v*) with beta|Omega|u* + alpha|Gamma|v* = m and u*^alpha = kappa v*^beta.
inline Equilibrium solve_equilibrium(const Kinetics& kin, double mass, double omega_measure, double gamma_measure) {
  kin.validate();
  if (!(mass > 0.0)) throw std::invalid_argument("solve_equilibrium: mass must be > 0");
  if (!(omega_measure > 0.0) || !(gamma_measure > 0.0))
    throw std::invalid_argument("solve_equilibrium: measures must be > 0");
  // g(0) = -m < 0 and g(m / (alpha|Gamma|)) > 0.
  return solve_equilibrium_bracketed(kin, mass, omega_measure, gamma_measure, 0.0,
                                     mass / (kin.alpha * gamma_measure));
}

}  // namespace bsrd
