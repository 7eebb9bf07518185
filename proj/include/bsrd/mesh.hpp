#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bsrd {

/// Sides of the rectangle, listed in counter-clockwise boundary order.
enum class Edge : std::uint8_t { bottom = 0, right = 1, top = 2, left = 3 };

inline constexpr std::array<Edge, 4> all_edges{Edge::bottom, Edge::right, Edge::top, Edge::left};

inline std::string_view to_string(Edge e) {
  switch (e) {
    case Edge::bottom: return "bottom";
    case Edge::right: return "right";
    case Edge::top: return "top";
    case Edge::left: return "left";
  }
  return "?";
}

inline Edge parse_edge(std::string_view name) {
  for (Edge e : all_edges)
    if (to_string(e) == name) return e;
  throw std::invalid_argument("unknown edge '" + std::string(name) + "'");
}

class EdgeSet {
 public:
  constexpr EdgeSet() = default;
  constexpr EdgeSet(std::initializer_list<Edge> edges) {
    for (Edge e : edges) insert(e);
  }

  constexpr void insert(Edge e) { bits_ |= bit(e); }
  [[nodiscard]] constexpr bool contains(Edge e) const { return (bits_ & bit(e)) != 0; }
  [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
  [[nodiscard]] constexpr int size() const {
    int n = 0;
    for (Edge e : all_edges) n += contains(e) ? 1 : 0;
    return n;
  }
  constexpr bool operator==(const EdgeSet&) const = default;

 private:
  static constexpr std::uint8_t bit(Edge e) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(e)); }
  std::uint8_t bits_ = 0;
};

/// Interior face between two bulk cells (two-point flux support).
struct BulkFace {
  std::size_t first;
  std::size_t second;
  double length;
  double distance;  // between cell centers
  [[nodiscard]] double transmissibility() const { return length / distance; }
};

/// Surface control volume: one boundary face of a bulk cell lying on an active edge.
struct SurfaceCell {
  Edge edge;
  std::size_t bulk_cell;  // trace cell
  double length;
  double x, y;  // face midpoint
};

/// Contact point between consecutive surface cells along a boundary chain.
struct SurfaceLink {
  std::size_t first;
  std::size_t second;
  double distance;  // arc length between the two face midpoints
};

class CoupledMesh;
CoupledMesh build_mesh(std::size_t nx, std::size_t ny, double lx, double ly, EdgeSet active_edges);

/// Uniform rectangular bulk grid with the surface chain on the active edges.
/// Bulk cells are indexed row-major, `j * nx + i`. Immutable once built.
class CoupledMesh {
 public:
  [[nodiscard]] std::size_t nx() const { return nx_; }
  [[nodiscard]] std::size_t ny() const { return ny_; }
  [[nodiscard]] double lx() const { return lx_; }
  [[nodiscard]] double ly() const { return ly_; }
  [[nodiscard]] double hx() const { return lx_ / static_cast<double>(nx_); }
  [[nodiscard]] double hy() const { return ly_ / static_cast<double>(ny_); }
  [[nodiscard]] EdgeSet active_edges() const { return active_; }

  [[nodiscard]] std::size_t bulk_count() const { return nx_ * ny_; }
  [[nodiscard]] std::size_t surface_count() const { return surface_.size(); }
  [[nodiscard]] double bulk_cell_volume() const { return hx() * hy(); }
  [[nodiscard]] double total_bulk_measure() const { return lx_ * ly_; }
  [[nodiscard]] double total_surface_measure() const { return surface_measure_; }

  [[nodiscard]] std::size_t cell_index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
  [[nodiscard]] std::array<double, 2> cell_center(std::size_t idx) const {
    const std::size_t i = idx % nx_;
    const std::size_t j = idx / nx_;
    return {(static_cast<double>(i) + 0.5) * hx(), (static_cast<double>(j) + 0.5) * hy()};
  }

  [[nodiscard]] const std::vector<SurfaceCell>& surface_cells() const { return surface_; }
  [[nodiscard]] const std::vector<BulkFace>& bulk_faces() const { return faces_; }
  [[nodiscard]] const std::vector<SurfaceLink>& surface_links() const { return links_; }

 private:
  friend CoupledMesh build_mesh(std::size_t, std::size_t, double, double, EdgeSet);
  CoupledMesh() = default;

  std::size_t nx_ = 0, ny_ = 0;
  double lx_ = 0.0, ly_ = 0.0;
  EdgeSet active_;
  double surface_measure_ = 0.0;
  std::vector<SurfaceCell> surface_;
  std::vector<BulkFace> faces_;
  std::vector<SurfaceLink> links_;
};

namespace detail {

inline Edge next_edge(Edge e) { return static_cast<Edge>((static_cast<unsigned>(e) + 1u) % 4u); }
inline Edge prev_edge(Edge e) { return static_cast<Edge>((static_cast<unsigned>(e) + 3u) % 4u); }

// Surface cells of one edge in counter-clockwise order.
inline void append_edge_cells(const CoupledMesh& m, Edge e, std::vector<SurfaceCell>& out) {
  const std::size_t nx = m.nx(), ny = m.ny();
  const double hx = m.hx(), hy = m.hy();
  switch (e) {
    case Edge::bottom:
      for (std::size_t i = 0; i < nx; ++i)
        out.push_back({e, m.cell_index(i, 0), hx, (static_cast<double>(i) + 0.5) * hx, 0.0});
      break;
    case Edge::right:
      for (std::size_t j = 0; j < ny; ++j)
        out.push_back({e, m.cell_index(nx - 1, j), hy, m.lx(), (static_cast<double>(j) + 0.5) * hy});
      break;
    case Edge::top:
      for (std::size_t i = nx; i-- > 0;)
        out.push_back({e, m.cell_index(i, ny - 1), hx, (static_cast<double>(i) + 0.5) * hx, m.ly()});
      break;
    case Edge::left:
      for (std::size_t j = ny; j-- > 0;)
        out.push_back({e, m.cell_index(0, j), hy, 0.0, (static_cast<double>(j) + 0.5) * hy});
      break;
  }
}

}  // namespace detail

/// Interior faces of the bulk grid: x-faces first, then y-faces.
inline std::vector<BulkFace> bulk_face_list(const CoupledMesh& mesh) {
  std::vector<BulkFace> faces;
  const std::size_t nx = mesh.nx(), ny = mesh.ny();
  faces.reserve(ny * (nx - 1) + nx * (ny - 1));
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i)
      faces.push_back({mesh.cell_index(i, j), mesh.cell_index(i + 1, j), mesh.hy(), mesh.hx()});
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      faces.push_back({mesh.cell_index(i, j), mesh.cell_index(i, j + 1), mesh.hx(), mesh.hy()});
  return faces;
}

inline CoupledMesh build_mesh(std::size_t nx, std::size_t ny, double lx, double ly, EdgeSet active_edges) {
  if (nx == 0 || ny == 0) throw std::invalid_argument("build_mesh: cell counts must be >= 1");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("build_mesh: side lengths must be > 0");
  if (active_edges.empty()) throw std::invalid_argument("build_mesh: active edge set is empty");

  CoupledMesh m;
  m.nx_ = nx;
  m.ny_ = ny;
  m.lx_ = lx;
  m.ly_ = ly;
  m.active_ = active_edges;

  // Start the traversal at an active edge whose predecessor is inactive so that
  // every connected chain is contiguous in the surface list.
  Edge start = Edge::bottom;
  const bool closed_loop = active_edges.size() == 4;
  if (!closed_loop) {
    for (Edge e : all_edges) {
      if (active_edges.contains(e) && !active_edges.contains(detail::prev_edge(e))) {
        start = e;
        break;
      }
    }
  }

  Edge e = start;
  for (int n = 0; n < 4; ++n, e = detail::next_edge(e)) {
    if (!active_edges.contains(e)) continue;
    const std::size_t first_new = m.surface_.size();
    detail::append_edge_cells(m, e, m.surface_);
    const std::size_t end = m.surface_.size();
    // Link to the chain coming in from the previous edge through the shared corner.
    if (first_new > 0 && active_edges.contains(detail::prev_edge(e)) &&
        m.surface_[first_new - 1].edge == detail::prev_edge(e)) {
      const double d = 0.5 * (m.surface_[first_new - 1].length + m.surface_[first_new].length);
      m.links_.push_back({first_new - 1, first_new, d});
    }
    for (std::size_t s = first_new; s + 1 < end; ++s)
      m.links_.push_back({s, s + 1, 0.5 * (m.surface_[s].length + m.surface_[s + 1].length)});
  }
  if (closed_loop) {
    const std::size_t last = m.surface_.size() - 1;
    m.links_.push_back({last, 0, 0.5 * (m.surface_[last].length + m.surface_[0].length)});
  }

  double measure = 0.0;
  for (const auto& s : m.surface_) measure += s.length;
  m.surface_measure_ = measure;
  m.faces_ = bulk_face_list(m);
  return m;
}

}  // namespace bsrd
