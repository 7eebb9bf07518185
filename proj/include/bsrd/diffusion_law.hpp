#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bsrd/clamp_window.hpp"

namespace bsrd {

/// Scalar diffusion coefficient laws. Bulk laws depend on u only. On the
/// surface, power/exponential laws act on v and surface_cross is
/// v / (alpha u + beta v) with u taken from the trace cell.
class DiffusionLaw {
 public:
  enum class Kind { power, exponential, constant, surface_cross };

  static DiffusionLaw power(double gamma) { return {Kind::power, gamma}; }
  static DiffusionLaw exponential(double delta) { return {Kind::exponential, delta}; }
  static DiffusionLaw constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("constant diffusion coefficient must be > 0");
    return {Kind::constant, c};
  }
  static DiffusionLaw surface_cross(double alpha, double beta) {
    DiffusionLaw law{Kind::surface_cross, 0.0};
    law.alpha_ = alpha;
    law.beta_ = beta;
    return law;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double parameter() const { return param_; }
  [[nodiscard]] bool depends_on_u() const { return kind_ == Kind::surface_cross; }

  /// Coefficient at already-clamped positive arguments. `s` is the diffusing
  /// species (u in the bulk, v on the surface), `u` the bulk trace value.
  [[nodiscard]] double value(double s, double u) const {
    switch (kind_) {
      case Kind::power: return std::pow(s, param_);
      case Kind::exponential: return std::exp(param_ * s);
      case Kind::constant: return param_;
      case Kind::surface_cross: return s / (alpha_ * u + beta_ * s);
    }
    return 0.0;
  }

  struct Partials {
    double ds = 0.0;
    double du = 0.0;
  };

  [[nodiscard]] Partials partials(double s, double u) const {
    switch (kind_) {
      case Kind::power: return {param_ * std::pow(s, param_ - 1.0), 0.0};
      case Kind::exponential: return {param_ * std::exp(param_ * s), 0.0};
      case Kind::constant: return {0.0, 0.0};
      case Kind::surface_cross: {
        const double den = alpha_ * u + beta_ * s;
        return {alpha_ * u / (den * den), -alpha_ * s / (den * den)};
      }
    }
    return {};
  }

 private:
  DiffusionLaw(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
  double alpha_ = 1.0;
  double beta_ = 1.0;
};

inline std::string_view to_string(DiffusionLaw::Kind k) {
  switch (k) {
    case DiffusionLaw::Kind::power: return "power";
    case DiffusionLaw::Kind::exponential: return "exponential";
    case DiffusionLaw::Kind::constant: return "constant";
    case DiffusionLaw::Kind::surface_cross: return "surface_cross";
  }
  return "?";
}

/// Bulk coefficient μ(û).
inline double eval_bulk_diffusion(const DiffusionLaw& law, double u, const ClampWindow& window) {
  return law.value(window.clamp_u(u), 0.0);
}

/// Surface coefficient μ_Γ(û, v̂).
inline double eval_surface_diffusion(const DiffusionLaw& law, double u, double v, const ClampWindow& window) {
  return law.value(window.clamp_v(v), window.clamp_u(u));
}

/// Bulk coefficient when `v` is absent, surface coefficient otherwise.
inline double eval_diffusion(const DiffusionLaw& law, double u, std::optional<double> v, const ClampWindow& window) {
  return v ? eval_surface_diffusion(law, u, *v, window) : eval_bulk_diffusion(law, u, window);
}

/// Derivatives of the clamped coefficient with respect to the raw arguments;
/// zero in directions where the clamp is active.
struct ClampedPartials {
  double value = 0.0;
  double d_species = 0.0;
  double d_trace = 0.0;
};

inline ClampedPartials bulk_diffusion_partials(const DiffusionLaw& law, double u, const ClampWindow& window) {
  const double uh = window.clamp_u(u);
  const auto p = law.partials(uh, 0.0);
  return {law.value(uh, 0.0), window.clamps_u(u) ? 0.0 : p.ds, 0.0};
}

inline ClampedPartials surface_diffusion_partials(const DiffusionLaw& law, double u, double v,
                                                  const ClampWindow& window) {
  const double uh = window.clamp_u(u);
  const double vh = window.clamp_v(v);
  const auto p = law.partials(vh, uh);
  return {law.value(vh, uh), window.clamps_v(v) ? 0.0 : p.ds, window.clamps_u(u) ? 0.0 : p.du};
}

/// Extrema of a law over the clamp window (all laws are monotone in each argument).
struct CoefficientBounds {
  double lower;
  double upper;
};

inline CoefficientBounds bulk_coefficient_bounds(const DiffusionLaw& law, const ClampWindow& window) {
  const double a = law.value(window.u_floor(), 0.0);
  const double b = law.value(window.u_ceiling(), 0.0);
  return {std::min(a, b), std::max(a, b)};
}

inline CoefficientBounds surface_coefficient_bounds(const DiffusionLaw& law, const ClampWindow& window) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : {window.v_floor(), window.v_ceiling()})
    for (double u : {window.u_floor(), window.u_ceiling()}) {
      const double m = law.value(v, u);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  return {lo, hi};
}

}  // namespace bsrd
