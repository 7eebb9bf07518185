#pragma once

// Reference computations for the tests. Nothing here calls into the solver or
// equilibrium code paths it is used to check.

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

/// Equilibrium by bisection in u on
///   h(u) = beta |Omega| u + alpha |Gamma| (u^alpha / kappa)^{1/beta} - m,
/// run until the bracket stops shrinking.
struct EquilibriumPair {
  double u;
  double v;
};

inline EquilibriumPair bisect_equilibrium(double alpha, double beta, double kappa, double mass, double omega,
                                          double gamma) {
  auto v_of = [&](double u) { return std::pow(std::pow(u, alpha) / kappa, 1.0 / beta); };
  auto h = [&](double u) { return beta * omega * u + alpha * gamma * v_of(u) - mass; };
  double lo = 0.0, hi = mass / (beta * omega);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);
  return {u, v_of(u)};
}

/// One backward-Euler step of the single-cell exchange ODE
///   u' = -k alpha (u^alpha - kappa v^beta) g,   v' = k beta (u^alpha - kappa v^beta),
/// with g = |Gamma|/|Omega|, solved by a 2x2 Newton iteration with hand-written derivatives.
inline std::array<double, 2> single_cell_backward_euler(double u0, double v0, double dt, double k, double kappa,
                                                        double alpha, double beta, double g) {
  double u = u0, v = v0;
  for (int it = 0; it < 100; ++it) {
    const double f = k * (std::pow(u, alpha) - kappa * std::pow(v, beta));
    const double fu = k * alpha * std::pow(u, alpha - 1.0);
    const double fv = -k * kappa * beta * std::pow(v, beta - 1.0);
    const double r1 = u - u0 + dt * alpha * g * f;
    const double r2 = v - v0 - dt * beta * f;
    const double a11 = 1.0 + dt * alpha * g * fu, a12 = dt * alpha * g * fv;
    const double a21 = -dt * beta * fu, a22 = 1.0 - dt * beta * fv;
    const double det = a11 * a22 - a12 * a21;
    const double du = (r1 * a22 - a12 * r2) / det;
    const double dv = (a11 * r2 - a21 * r1) / det;
    u -= du;
    v -= dv;
    if (std::abs(du) <= 1e-16 * std::abs(u) && std::abs(dv) <= 1e-16 * std::abs(v)) break;
  }
  return {u, v};
}

/// Log-uniform sample on [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
  return std::exp(d(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace oracle
