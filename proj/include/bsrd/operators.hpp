#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bsrd/clamp_window.hpp"
#include "bsrd/diffusion_law.hpp"
#include "bsrd/kinetics.hpp"
#include "bsrd/mesh.hpp"

namespace bsrd {

/// Cell averages of the bulk field u and the surface field v at time t.
struct State {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

enum class FaceAveraging { arithmetic, harmonic };

/// Everything that defines the spatial operator besides the state.
struct Problem {
  CoupledMesh mesh;
  Kinetics kinetics;
  Equilibrium equilibrium;
  DiffusionLaw bulk_law;
  DiffusionLaw surface_law;
  ClampWindow window;
  FaceAveraging averaging = FaceAveraging::arithmetic;
};

/// beta * sum_i u_i |cell_i| + alpha * sum_j v_j |Gamma_j|.
inline double weighted_mass(const State& s, const CoupledMesh& mesh, const Kinetics& kin) {
  double bulk = 0.0;
  for (double u : s.u) bulk += u;
  bulk *= mesh.bulk_cell_volume();
  double surf = 0.0;
  const auto& cells = mesh.surface_cells();
  for (std::size_t j = 0; j < cells.size(); ++j) surf += s.v[j] * cells[j].length;
  return kin.beta * bulk + kin.alpha * surf;
}

inline void check_shape(const State& s, const CoupledMesh& mesh) {
  if (s.u.size() != mesh.bulk_count() || s.v.size() != mesh.surface_count())
    throw std::invalid_argument("state does not match mesh");
}

/// Receives Jacobian entries of the right-hand side, with unknowns ordered
/// as [u_0 .. u_{N-1}, v_0 .. v_{M-1}].
class JacobianSink {
 public:
  virtual ~JacobianSink() = default;
  virtual void add(std::size_t row, std::size_t col, double value) = 0;
};

namespace detail {

struct FaceMean {
  double value;
  double d_first;   // d mean / d mu_first
  double d_second;  // d mean / d mu_second
};

inline FaceMean face_mean(double a, double b, FaceAveraging avg) {
  if (avg == FaceAveraging::arithmetic) return {0.5 * (a + b), 0.5, 0.5};
  const double s = a + b;
  return {2.0 * a * b / s, 2.0 * b * b / (s * s), 2.0 * a * a / (s * s)};
}

inline void accumulate_bulk_diffusion(std::span<const double> u, const CoupledMesh& mesh, const DiffusionLaw& law,
                                      const ClampWindow& window, FaceAveraging avg, std::span<double> out,
                                      JacobianSink* jac) {
  const double inv_vol = 1.0 / mesh.bulk_cell_volume();
  std::vector<ClampedPartials> mu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mu[i] = bulk_diffusion_partials(law, u[i], window);

  for (const auto& f : mesh.bulk_faces()) {
    const std::size_t a = f.first, b = f.second;
    const double tr = f.transmissibility();
    const auto mf = face_mean(mu[a].value, mu[b].value, avg);
    const double du = u[b] - u[a];
    const double flux = mf.value * du * tr * inv_vol;  // into a, out of b
    out[a] += flux;
    out[b] -= flux;
    if (jac) {
      const double dfa = (mf.d_first * mu[a].d_species * du - mf.value) * tr * inv_vol;
      const double dfb = (mf.d_second * mu[b].d_species * du + mf.value) * tr * inv_vol;
      jac->add(a, a, dfa);
      jac->add(a, b, dfb);
      jac->add(b, a, -dfa);
      jac->add(b, b, -dfb);
    }
  }
}

inline void accumulate_surface_diffusion(std::span<const double> u, std::span<const double> v,
                                         const CoupledMesh& mesh, const DiffusionLaw& law, const ClampWindow& window,
                                         FaceAveraging avg, std::span<double> out, JacobianSink* jac) {
  const auto& cells = mesh.surface_cells();
  const std::size_t nb = mesh.bulk_count();
  std::vector<ClampedPartials> mu(v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    mu[j] = surface_diffusion_partials(law, u[cells[j].bulk_cell], v[j], window);

  for (const auto& link : mesh.surface_links()) {
    const std::size_t a = link.first, b = link.second;
    const auto mf = face_mean(mu[a].value, mu[b].value, avg);
    const double dv = v[b] - v[a];
    const double q = mf.value * dv / link.distance;
    const double ia = 1.0 / cells[a].length, ib = 1.0 / cells[b].length;
    out[a] += q * ia;
    out[b] -= q * ib;
    if (jac) {
      const double inv_d = 1.0 / link.distance;
      const double dq_va = (mf.d_first * mu[a].d_species * dv - mf.value) * inv_d;
      const double dq_vb = (mf.d_second * mu[b].d_species * dv + mf.value) * inv_d;
      const double dq_ua = mf.d_first * mu[a].d_trace * dv * inv_d;
      const double dq_ub = mf.d_second * mu[b].d_trace * dv * inv_d;
      const std::size_t ra = nb + a, rb = nb + b;
      const std::size_t ua = cells[a].bulk_cell, ub = cells[b].bulk_cell;
      jac->add(ra, ra, dq_va * ia);
      jac->add(ra, rb, dq_vb * ia);
      jac->add(rb, ra, -dq_va * ib);
      jac->add(rb, rb, -dq_vb * ib);
      jac->add(ra, ua, dq_ua * ia);
      jac->add(ra, ub, dq_ub * ia);
      jac->add(rb, ua, -dq_ua * ib);
      jac->add(rb, ub, -dq_ub * ib);
    }
  }
}

inline void accumulate_coupling(std::span<const double> u, std::span<const double> v, const CoupledMesh& mesh,
                                const Kinetics& kin, std::span<double> out_u, std::span<double> out_v,
                                JacobianSink* jac) {
  const auto& cells = mesh.surface_cells();
  const std::size_t nb = mesh.bulk_count();
  const double inv_vol = 1.0 / mesh.bulk_cell_volume();
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const std::size_t i = cells[j].bulk_cell;
    const double r = safe_rate(u[i], v[j], kin);
    const double w = cells[j].length * inv_vol;
    out_u[i] -= kin.alpha * r * w;
    out_v[j] += kin.beta * r;
    if (jac) {
      // Structural entries are always emitted so the sparsity pattern is state independent.
      const auto g = safe_rate_gradient(u[i], v[j], kin);
      jac->add(i, i, -kin.alpha * g.du * w);
      jac->add(i, nb + j, -kin.alpha * g.dv * w);
      jac->add(nb + j, i, kin.beta * g.du);
      jac->add(nb + j, nb + j, kin.beta * g.dv);
    }
  }
}

}  // namespace detail

/// Two-point-flux divergence of mu(û) grad u per bulk cell; no flux through the boundary.
inline std::vector<double> bulk_diffusion_apply(const State& s, const CoupledMesh& mesh, const DiffusionLaw& law,
                                                const ClampWindow& window,
                                                FaceAveraging avg = FaceAveraging::arithmetic) {
  check_shape(s, mesh);
  std::vector<double> out(s.u.size(), 0.0);
  detail::accumulate_bulk_diffusion(s.u, mesh, law, window, avg, out, nullptr);
  return out;
}

/// Surface diffusion along the boundary chain(s); chain ends carry zero flux.
inline std::vector<double> surface_diffusion_apply(const State& s, const CoupledMesh& mesh, const DiffusionLaw& law,
                                                   const ClampWindow& window,
                                                   FaceAveraging avg = FaceAveraging::arithmetic) {
  check_shape(s, mesh);
  std::vector<double> out(s.v.size(), 0.0);
  detail::accumulate_surface_diffusion(s.u, s.v, mesh, law, window, avg, out, nullptr);
  return out;
}

struct CouplingRates {
  std::vector<double> bulk;
  std::vector<double> surface;
};

/// Exchange through Gamma: the trace bulk cell loses alpha r |Gamma_j|/|cell|, the surface cell gains beta r.
inline CouplingRates coupling_apply(const State& s, const CoupledMesh& mesh, const Kinetics& kin) {
  check_shape(s, mesh);
  CouplingRates r{std::vector<double>(s.u.size(), 0.0), std::vector<double>(s.v.size(), 0.0)};
  detail::accumulate_coupling(s.u, s.v, mesh, kin, r.bulk, r.surface, nullptr);
  return r;
}

/// Full right-hand side F(w) = [bulk diffusion + coupling; surface diffusion + coupling],
/// optionally reporting its Jacobian.
inline void evaluate_rhs(std::span<const double> w, const Problem& p, std::span<double> out,
                         JacobianSink* jac = nullptr) {
  const std::size_t nb = p.mesh.bulk_count();
  const auto u = w.subspan(0, nb);
  const auto v = w.subspan(nb);
  std::fill(out.begin(), out.end(), 0.0);
  auto out_u = out.subspan(0, nb);
  auto out_v = out.subspan(nb);
  detail::accumulate_bulk_diffusion(u, p.mesh, p.bulk_law, p.window, p.averaging, out_u, jac);
  detail::accumulate_surface_diffusion(u, v, p.mesh, p.surface_law, p.window, p.averaging, out_v, jac);
  detail::accumulate_coupling(u, v, p.mesh, p.kinetics, out_u, out_v, jac);
}

}  // namespace bsrd
