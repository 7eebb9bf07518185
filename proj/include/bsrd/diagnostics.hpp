#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bsrd/operators.hpp"

namespace bsrd {

/// Entropy density e(z) = z ln z - z + 1, continuously extended by e(0) = 1.
inline double entropy_e(double z) {
  if (z < 0.0 || std::isnan(z)) throw std::domain_error("entropy_e: argument must be nonnegative");
  if (z == 0.0) return 1.0;
  return z * std::log(z) - z + 1.0;
}

/// Sum_i u* e(u_i/u*) |cell| + sum_j v* e(v_j/v*) |Gamma_j|.
inline double relative_entropy(const State& s, const Equilibrium& eq, const CoupledMesh& mesh) {
  check_shape(s, mesh);
  double bulk = 0.0;
  for (double u : s.u) bulk += eq.u_star * entropy_e(u / eq.u_star);
  bulk *= mesh.bulk_cell_volume();
  double surf = 0.0;
  const auto& cells = mesh.surface_cells();
  for (std::size_t j = 0; j < cells.size(); ++j) surf += eq.v_star * entropy_e(s.v[j] / eq.v_star) * cells[j].length;
  return bulk + surf;
}

// Upper truncation tests. The threshold itself belongs to the untruncated branch.
inline bool above_u_envelope(double u, const ClampWindow& w) {
  return u > 0.0 && std::pow(u / w.u_star, w.alpha) > w.L;
}
inline bool above_v_envelope(double v, const ClampWindow& w) {
  return v > 0.0 && v / w.v_star > std::pow(w.L, 1.0 / w.beta);
}

/// Adapted entropy of the truncated fields: u^L = u* below the envelope and
/// u / L^{1/alpha} above it (likewise for v with beta), weighted by L^{1/alpha}, L^{1/beta}.
inline double adapted_entropy(const State& s, const Equilibrium& eq, const CoupledMesh& mesh,
                              const ClampWindow& w) {
  check_shape(s, mesh);
  const double lu = std::pow(w.L, 1.0 / w.alpha);
  const double lv = std::pow(w.L, 1.0 / w.beta);
  double bulk = 0.0;
  for (double u : s.u) {
    const double uL = above_u_envelope(u, w) ? u / lu : eq.u_star;
    bulk += eq.u_star * entropy_e(uL / eq.u_star);
  }
  bulk *= mesh.bulk_cell_volume();
  double surf = 0.0;
  const auto& cells = mesh.surface_cells();
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double vL = above_v_envelope(s.v[j], w) ? s.v[j] / lv : eq.v_star;
    surf += eq.v_star * entropy_e(vL / eq.v_star) * cells[j].length;
  }
  return lu * bulk + lv * surf;
}

namespace detail {
inline double xi_entry(double u, const ClampWindow& w) {
  return above_u_envelope(u, w) ? std::log(u / w.u_star) - std::log(w.L) / w.alpha : 0.0;
}
inline double chi_entry(double v, const ClampWindow& w) {
  return above_v_envelope(v, w) ? std::log(v / w.v_star) - std::log(w.L) / w.beta : 0.0;
}
}  // namespace detail

struct TruncatedPotentials {
  std::vector<double> xi;   // per bulk cell
  std::vector<double> chi;  // per surface cell
};

/// e'(u^L/u*) and e'(v^L/v*): zero inside the upper envelope, positive log excess above it.
inline TruncatedPotentials truncated_potentials(const State& s, const ClampWindow& w) {
  TruncatedPotentials p;
  p.xi.reserve(s.u.size());
  p.chi.reserve(s.v.size());
  for (double u : s.u) {
    if (!(u > 0.0)) throw std::domain_error("truncated_potentials: bulk entries must be positive");
    p.xi.push_back(detail::xi_entry(u, w));
  }
  for (double v : s.v) {
    if (!(v > 0.0)) throw std::domain_error("truncated_potentials: surface entries must be positive");
    p.chi.push_back(detail::chi_entry(v, w));
  }
  return p;
}

/// Surface cells classified by which truncated potential is active at the trace pair.
struct PartitionCounts {
  std::size_t xi_only = 0;
  std::size_t chi_only = 0;
  std::size_t both = 0;
};

/// Gamma-integrals of k Λ (alpha ln(u/u*) - beta ln(v/v*)) (alpha xi^L - beta chi^L)
/// split by partition. Each part is nonnegative; cells with u <= 0 or v <= 0 are skipped.
struct ReactionDissipationSplit {
  double xi_only = 0.0;
  double chi_only = 0.0;
  double both = 0.0;
  double total = 0.0;
  double magnitude = 0.0;  // integral of the absolute integrand, a scale for round-off
  PartitionCounts counts;
};

inline ReactionDissipationSplit reaction_dissipation_split(const State& s, const Equilibrium& eq,
                                                           const Kinetics& kin, const CoupledMesh& mesh,
                                                           const ClampWindow& w) {
  check_shape(s, mesh);
  ReactionDissipationSplit out;
  const auto& cells = mesh.surface_cells();
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double u = s.u[cells[j].bulk_cell];
    const double v = s.v[j];
    if (!(u > 0.0) || !(v > 0.0)) continue;
    const double xi = detail::xi_entry(u, w);
    const double chi = detail::chi_entry(v, w);
    if (xi == 0.0 && chi == 0.0) continue;
    const double lambda = log_mean(std::pow(u, kin.alpha), kin.kappa * std::pow(v, kin.beta));
    const double integrand =
        kin.k * lambda * potential_difference(u, v, kin, eq) * (kin.alpha * xi - kin.beta * chi) * cells[j].length;
    out.magnitude += std::abs(integrand);
    if (xi > 0.0 && chi == 0.0) {
      out.xi_only += integrand;
      ++out.counts.xi_only;
    } else if (xi == 0.0 && chi > 0.0) {
      out.chi_only += integrand;
      ++out.counts.chi_only;
    } else {
      out.both += integrand;
      ++out.counts.both;
    }
  }
  out.total = out.xi_only + out.chi_only + out.both;
  return out;
}

/// Lower truncation levels. `inequality` uses sigma_v = (l/kappa)^{1/beta}, the
/// level implied by l <= kappa v^beta; `kappa_scaled` uses sigma_v = kappa l^{1/beta}.
enum class LowerLevelConvention { inequality, kappa_scaled };

struct LowerComparison {
  std::vector<double> u_minus;
  std::vector<double> v_minus;
  double sigma_u = 0.0;
  double sigma_v = 0.0;
  double sigma_v_scaled = 0.0;
  double u_minus_sq = 0.0;  // integral of u_-^2 over Omega
  double v_minus_sq = 0.0;  // integral of v_-^2 over Gamma
  double v_minus_sq_scaled = 0.0;
  // Surface classification at trace pairs.
  std::size_t gamma_u = 0;     // u < sigma_u, v >= sigma_v
  std::size_t gamma_v = 0;     // u >= sigma_u, v < sigma_v
  std::size_t gamma_less = 0;  // both below, u^alpha < kappa v^beta
  std::size_t gamma_more = 0;  // both below, u^alpha > kappa v^beta
};

/// u_- = min(u - sigma_u, 0) with sigma_u = l^{1/alpha}, and v_- likewise.
inline LowerComparison comparison_lower_fields(const State& s, const ClampWindow& w, const Kinetics& kin,
                                               const CoupledMesh& mesh,
                                               LowerLevelConvention conv = LowerLevelConvention::inequality) {
  check_shape(s, mesh);
  LowerComparison c;
  c.sigma_u = std::pow(w.l, 1.0 / kin.alpha);
  const double sigma_ineq = std::pow(w.l / kin.kappa, 1.0 / kin.beta);
  c.sigma_v_scaled = kin.kappa * std::pow(w.l, 1.0 / kin.beta);
  c.sigma_v = conv == LowerLevelConvention::inequality ? sigma_ineq : c.sigma_v_scaled;

  c.u_minus.reserve(s.u.size());
  for (double u : s.u) {
    const double m = std::min(u - c.sigma_u, 0.0);
    c.u_minus.push_back(m);
    c.u_minus_sq += m * m;
  }
  c.u_minus_sq *= mesh.bulk_cell_volume();

  const auto& cells = mesh.surface_cells();
  c.v_minus.reserve(s.v.size());
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const double v = s.v[j];
    const double m = std::min(v - c.sigma_v, 0.0);
    const double mp = std::min(v - c.sigma_v_scaled, 0.0);
    c.v_minus.push_back(m);
    c.v_minus_sq += m * m * cells[j].length;
    c.v_minus_sq_scaled += mp * mp * cells[j].length;

    const double u = s.u[cells[j].bulk_cell];
    const bool u_low = u < c.sigma_u;
    const bool v_low = v < c.sigma_v;
    if (u_low && !v_low) {
      ++c.gamma_u;
    } else if (!u_low && v_low) {
      ++c.gamma_v;
    } else if (u_low && v_low) {
      const double a = u > 0.0 ? std::pow(u, kin.alpha) : 0.0;
      const double b = v > 0.0 ? kin.kappa * std::pow(v, kin.beta) : 0.0;
      if (a < b) ++c.gamma_less;
      if (a > b) ++c.gamma_more;
    }
  }
  return c;
}

/// Max-norm distance of both fields to the equilibrium constants.
inline double sup_distance(const State& s, const Equilibrium& eq) {
  double d = 0.0;
  for (double u : s.u) d = std::max(d, std::abs(u - eq.u_star));
  for (double v : s.v) d = std::max(d, std::abs(v - eq.v_star));
  return d;
}

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double entropy = 0.0;
  double entropy_L = 0.0;
  double u_env_max = 0.0;  // max (u/u*)^alpha
  double v_env_max = 0.0;  // max (v/v*)^beta
  double u_env_min = 0.0;  // min u^alpha
  double v_env_min = 0.0;  // min kappa v^beta
  // Right-hand-side terms of the adapted-entropy balance; each is <= 0.
  double reaction_dissipation = 0.0;
  double diffusion_dissipation_bulk = 0.0;
  double diffusion_dissipation_surface = 0.0;
  std::size_t clamp_activations = 0;
  PartitionCounts partition_counts;
  double lower_u_minus_sq = 0.0;
  double lower_v_minus_sq = 0.0;
  double sup_distance = 0.0;
};

namespace detail {
// Raise to a power with the sign convention min(x,0)^p := 0, used only for envelope monitors.
inline double nonneg_pow(double x, double p) { return x > 0.0 ? std::pow(x, p) : 0.0; }
}  // namespace detail

inline DiagnosticsRecord record(const State& s, const Problem& p) {
  const auto& mesh = p.mesh;
  const auto& kin = p.kinetics;
  const auto& eq = p.equilibrium;
  const auto& w = p.window;
  check_shape(s, mesh);

  DiagnosticsRecord r;
  r.t = s.t;
  r.mass = weighted_mass(s, mesh, kin);
  r.entropy = relative_entropy(s, eq, mesh);
  r.entropy_L = adapted_entropy(s, eq, mesh, w);

  r.u_env_max = -std::numeric_limits<double>::infinity();
  r.v_env_max = r.u_env_max;
  r.u_env_min = std::numeric_limits<double>::infinity();
  r.v_env_min = r.u_env_min;
  for (double u : s.u) {
    r.u_env_max = std::max(r.u_env_max, detail::nonneg_pow(u / eq.u_star, kin.alpha));
    r.u_env_min = std::min(r.u_env_min, detail::nonneg_pow(u, kin.alpha));
  }
  for (double v : s.v) {
    r.v_env_max = std::max(r.v_env_max, detail::nonneg_pow(v / eq.v_star, kin.beta));
    r.v_env_min = std::min(r.v_env_min, kin.kappa * detail::nonneg_pow(v, kin.beta));
  }

  const auto split = reaction_dissipation_split(s, eq, kin, mesh, w);
  r.reaction_dissipation = -split.total;
  r.partition_counts = split.counts;

  std::vector<double> xi(s.u.size()), chi(s.v.size());
  for (std::size_t i = 0; i < s.u.size(); ++i) xi[i] = detail::xi_entry(s.u[i], w);
  for (std::size_t j = 0; j < s.v.size(); ++j) chi[j] = detail::chi_entry(s.v[j], w);

  std::vector<double> mu(s.u.size());
  for (std::size_t i = 0; i < s.u.size(); ++i) mu[i] = eval_bulk_diffusion(p.bulk_law, s.u[i], w);
  double bulk = 0.0;
  for (const auto& f : mesh.bulk_faces()) {
    const double mf = detail::face_mean(mu[f.first], mu[f.second], p.averaging).value;
    bulk -= mf * (s.u[f.second] - s.u[f.first]) * (xi[f.second] - xi[f.first]) * f.transmissibility();
  }
  r.diffusion_dissipation_bulk = bulk;

  const auto& cells = mesh.surface_cells();
  std::vector<double> mug(s.v.size());
  for (std::size_t j = 0; j < s.v.size(); ++j)
    mug[j] = eval_surface_diffusion(p.surface_law, s.u[cells[j].bulk_cell], s.v[j], w);
  double surf = 0.0;
  for (const auto& link : mesh.surface_links()) {
    const double mf = detail::face_mean(mug[link.first], mug[link.second], p.averaging).value;
    surf -= mf * (s.v[link.second] - s.v[link.first]) * (chi[link.second] - chi[link.first]) / link.distance;
  }
  r.diffusion_dissipation_surface = surf;

  for (double u : s.u) r.clamp_activations += w.clamps_u(u) ? 1 : 0;
  for (double v : s.v) r.clamp_activations += w.clamps_v(v) ? 1 : 0;

  const auto lower = comparison_lower_fields(s, w, kin, mesh);
  r.lower_u_minus_sq = lower.u_minus_sq;
  r.lower_v_minus_sq = lower.v_minus_sq;
  r.sup_distance = sup_distance(s, eq);
  return r;
}

}  // namespace bsrd
