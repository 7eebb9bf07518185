#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsrd/diagnostics.hpp"

namespace bsrd {

/// %.17g: round-trips every double.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline constexpr const char* diagnostics_header =
    "t,mass,entropy,entropy_L,u_env_max,v_env_max,u_env_min,v_env_min,reaction_diss,diff_diss_bulk,diff_diss_surf,"
    "clamp_activations";

inline void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r) {
  out << format_number(r.t) << ',' << format_number(r.mass) << ',' << format_number(r.entropy) << ','
      << format_number(r.entropy_L) << ',' << format_number(r.u_env_max) << ',' << format_number(r.v_env_max) << ','
      << format_number(r.u_env_min) << ',' << format_number(r.v_env_min) << ','
      << format_number(r.reaction_dissipation) << ',' << format_number(r.diffusion_dissipation_bulk) << ','
      << format_number(r.diffusion_dissipation_surface) << ',' << r.clamp_activations << '\n';
}

/// One row per control volume: kind,index,x,y,value (bulk cells first).
inline void write_state_csv(std::ostream& out, const CoupledMesh& mesh, const State& s) {
  check_shape(s, mesh);
  out << "kind,index,x,y,value\n";
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const auto c = mesh.cell_center(i);
    out << "bulk," << i << ',' << format_number(c[0]) << ',' << format_number(c[1]) << ',' << format_number(s.u[i])
        << '\n';
  }
  const auto& cells = mesh.surface_cells();
  for (std::size_t j = 0; j < s.v.size(); ++j)
    out << "surface," << j << ',' << format_number(cells[j].x) << ',' << format_number(cells[j].y) << ','
        << format_number(s.v[j]) << '\n';
}

/// Reads a file in the write_state_csv layout; every control volume must appear exactly once.
inline State read_state_csv(std::istream& in, const CoupledMesh& mesh) {
  State s;
  s.u.assign(mesh.bulk_count(), 0.0);
  s.v.assign(mesh.surface_count(), 0.0);
  std::vector<bool> seen_u(s.u.size(), false), seen_v(s.v.size(), false);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || (n == 1 && line.rfind("kind,", 0) == 0)) continue;
    std::stringstream ss(line);
    std::string kind, index, x, y, value;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, index, ',') || !std::getline(ss, x, ',') ||
        !std::getline(ss, y, ',') || !std::getline(ss, value))
      throw std::runtime_error("state file line " + std::to_string(n) + ": expected kind,index,x,y,value");
    const std::size_t idx = std::stoul(index);
    const double val = std::stod(value);
    if (kind == "bulk" && idx < s.u.size() && !seen_u[idx]) {
      s.u[idx] = val;
      seen_u[idx] = true;
    } else if (kind == "surface" && idx < s.v.size() && !seen_v[idx]) {
      s.v[idx] = val;
      seen_v[idx] = true;
    } else {
      throw std::runtime_error("state file line " + std::to_string(n) + ": bad or repeated cell");
    }
  }
  for (bool b : seen_u)
    if (!b) throw std::runtime_error("state file: missing bulk cells");
  for (bool b : seen_v)
    if (!b) throw std::runtime_error("state file: missing surface cells");
  return s;
}

}  // namespace bsrd
