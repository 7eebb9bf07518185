#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>

#include "bsrd/kinetics.hpp"

namespace bsrd {

/// Exponent used in the surface clamp conditions l/2 < (v/v*)^p < 2L.
/// `alpha` uses the bulk exponent for v as well; `beta` uses the scale of the
/// upper envelope for v.
enum class SurfaceClampExponent { alpha, beta };

/// Pointwise envelope (l, L) inside which the solution stays, and the clamp
/// applied to the arguments of the diffusion coefficients.
struct ClampWindow {
  double l = 1.0;
  double L = 1.0;
  double u_star = 1.0;
  double v_star = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;
  SurfaceClampExponent surface_exponent = SurfaceClampExponent::alpha;

  void validate() const {
    if (!(l > 0.0) || !(L >= l) || !std::isfinite(L))
      throw std::invalid_argument("clamp window: need 0 < l <= L < inf");
  }

  [[nodiscard]] double surface_power() const {
    return surface_exponent == SurfaceClampExponent::alpha ? alpha : beta;
  }

  // Caps in concentration units: the ratio conditions are monotone in u and v.
  [[nodiscard]] double u_floor() const { return u_star * std::pow(0.5 * l, 1.0 / alpha); }
  [[nodiscard]] double u_ceiling() const { return u_star * std::pow(2.0 * L, 1.0 / alpha); }
  [[nodiscard]] double v_floor() const { return v_star * std::pow(0.5 * l, 1.0 / surface_power()); }
  [[nodiscard]] double v_ceiling() const { return v_star * std::pow(2.0 * L, 1.0 / surface_power()); }

  [[nodiscard]] double clamp_u(double u) const { return std::clamp(u, u_floor(), u_ceiling()); }
  [[nodiscard]] double clamp_v(double v) const { return std::clamp(v, v_floor(), v_ceiling()); }
  [[nodiscard]] bool clamps_u(double u) const { return u < u_floor() || u > u_ceiling(); }
  [[nodiscard]] bool clamps_v(double v) const { return v < v_floor() || v > v_ceiling(); }
};

inline ClampWindow make_window(double l, double L, const Kinetics& kin, const Equilibrium& eq,
                               SurfaceClampExponent exponent = SurfaceClampExponent::alpha) {
  ClampWindow w{l, L, eq.u_star, eq.v_star, kin.alpha, kin.beta, kin.kappa, exponent};
  w.validate();
  return w;
}

/// l = min(c_u^alpha, kappa c_v^beta), L = max(C_u^alpha, C_v^beta) where
/// c, C bound u0/u* and v0/v* from below and above.
inline ClampWindow window_from_initial_data(std::span<const double> u0, std::span<const double> v0,
                                            const Kinetics& kin, const Equilibrium& eq,
                                            SurfaceClampExponent exponent = SurfaceClampExponent::alpha) {
  if (u0.empty() || v0.empty()) throw std::invalid_argument("window_from_initial_data: empty field");
  const auto [u_min, u_max] = std::minmax_element(u0.begin(), u0.end());
  const auto [v_min, v_max] = std::minmax_element(v0.begin(), v0.end());
  if (!(*u_min > 0.0) || !(*v_min > 0.0))
    throw std::invalid_argument("window_from_initial_data: initial data must be positive");
  const double cu = *u_min / eq.u_star, Cu = *u_max / eq.u_star;
  const double cv = *v_min / eq.v_star, Cv = *v_max / eq.v_star;
  const double l = std::min(std::pow(cu, kin.alpha), kin.kappa * std::pow(cv, kin.beta));
  const double L = std::max(std::pow(Cu, kin.alpha), std::pow(Cv, kin.beta));
  return make_window(l, L, kin, eq, exponent);
}

/// (û, v̂): arguments outside the window are replaced by the nearer cap.
inline std::pair<double, double> clamp_state(double u, double v, const ClampWindow& window) {
  return {window.clamp_u(u), window.clamp_v(v)};
}

}  // namespace bsrd
