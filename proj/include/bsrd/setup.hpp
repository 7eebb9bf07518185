#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "bsrd/config.hpp"
#include "bsrd/io.hpp"

namespace bsrd {

inline DiffusionLaw make_law(const LawSpec& spec, const Kinetics& kin) {
  switch (spec.kind) {
    case DiffusionLaw::Kind::power: return DiffusionLaw::power(spec.param);
    case DiffusionLaw::Kind::exponential: return DiffusionLaw::exponential(spec.param);
    case DiffusionLaw::Kind::constant: return DiffusionLaw::constant(spec.param);
    case DiffusionLaw::Kind::surface_cross: return DiffusionLaw::surface_cross(kin.alpha, kin.beta);
  }
  throw std::invalid_argument("unknown diffusion law");
}

/// Two Gaussian bumps of opposite sign on top of a detailed-balance constant
/// state; the surface field carries the trace of the same bumps.
inline State two_blob_state(const CoupledMesh& mesh, const Kinetics& kin, double u_base, double amplitude,
                            double width_fraction) {
  const double v_base = std::pow(std::pow(u_base, kin.alpha) / kin.kappa, 1.0 / kin.beta);
  const double w = width_fraction * std::min(mesh.lx(), mesh.ly());
  const double c1x = 0.3 * mesh.lx(), c1y = 0.65 * mesh.ly();
  const double c2x = 0.7 * mesh.lx(), c2y = 0.35 * mesh.ly();
  auto bumps = [&](double x, double y) {
    const double g1 = std::exp(-((x - c1x) * (x - c1x) + (y - c1y) * (y - c1y)) / (2.0 * w * w));
    const double g2 = std::exp(-((x - c2x) * (x - c2x) + (y - c2y) * (y - c2y)) / (2.0 * w * w));
    return amplitude * (g1 - g2);
  };
  constexpr double floor_fraction = 1e-3;
  State s;
  s.u.resize(mesh.bulk_count());
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const auto c = mesh.cell_center(i);
    s.u[i] = std::max(u_base * (1.0 + bumps(c[0], c[1])), floor_fraction * u_base);
  }
  const auto& cells = mesh.surface_cells();
  s.v.resize(cells.size());
  for (std::size_t j = 0; j < cells.size(); ++j)
    s.v[j] = std::max(v_base * (1.0 + bumps(cells[j].x, cells[j].y)), floor_fraction * v_base);
  return s;
}

struct Setup {
  Problem problem;
  State initial;
  StepConfig step;
};

/// Builds mesh, initial data, equilibrium and clamp window from a validated config.
inline Setup build_setup(const RunConfig& cfg) {
  CoupledMesh mesh = build_mesh(cfg.nx, cfg.ny, cfg.lx, cfg.ly, cfg.active_edges);
  const Kinetics& kin = cfg.kinetics;

  State initial;
  switch (cfg.initial) {
    case InitialKind::constant:
      initial.u.assign(mesh.bulk_count(), cfg.initial_u);
      initial.v.assign(mesh.surface_count(), cfg.initial_v);
      break;
    case InitialKind::two_blob:
      initial = two_blob_state(mesh, kin, cfg.initial_u, cfg.blob_amplitude, cfg.blob_width);
      break;
    case InitialKind::file: {
      std::ifstream in(cfg.initial_file);
      if (!in) throw ConfigError({{ConfigIssue::Kind::bad_value, "initial_file", "cannot open '" + cfg.initial_file + "'"}});
      try {
        initial = read_state_csv(in, mesh);
      } catch (const std::exception& e) {
        throw ConfigError({{ConfigIssue::Kind::bad_value, "initial_file", e.what()}});
      }
      break;
    }
  }
  for (double x : initial.u)
    if (!(x > 0.0)) throw ConfigError({{ConfigIssue::Kind::nonpositive_initial_data, "u0", "bulk initial data must be > 0"}});
  for (double x : initial.v)
    if (!(x > 0.0))
      throw ConfigError({{ConfigIssue::Kind::nonpositive_initial_data, "v0", "surface initial data must be > 0"}});

  const double mass = weighted_mass(initial, mesh, kin);
  const Equilibrium eq = solve_equilibrium(kin, mass, mesh.total_bulk_measure(), mesh.total_surface_measure());
  const ClampWindow window = cfg.clamp_l ? make_window(*cfg.clamp_l, *cfg.clamp_L, kin, eq, cfg.surface_clamp_exponent)
                                         : window_from_initial_data(initial.u, initial.v, kin, eq,
                                                                    cfg.surface_clamp_exponent);

  StepConfig step;
  step.dt = cfg.dt;
  step.newton_tol = cfg.newton_tol;
  step.newton_max_iter = cfg.newton_max_iter;
  step.theta = cfg.theta;
  step.max_halvings = cfg.max_halvings;
  step.jacobian = cfg.jacobian;

  Problem problem{std::move(mesh),          kin,    eq, make_law(cfg.bulk_law, kin), make_law(cfg.surface_law, kin),
                  window, cfg.face_averaging};
  return {std::move(problem), std::move(initial), step};
}

}  // namespace bsrd
