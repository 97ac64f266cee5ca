#include "coupledrd/mesh.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace crd {

int Mesh::cell_at(Vec2 p) const {
  int i = static_cast<int>(std::floor((p[0] - x0) / h));
  int j = static_cast<int>(std::floor((p[1] - y0) / h));
  if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
  return grid[static_cast<std::size_t>(j) * nx + i];
}

int Mesh::count(Side s) const {
  int n = 0;
  for (const Cell& c : cells) n += c.side == s ? 1 : 0;
  return n;
}

double Mesh::compartment_volume(Side s) const {
  double v = 0.0;
  for (const Cell& c : cells)
    if (c.side == s) v += c.volume;
  return v;
}

double Mesh::interface_length() const {
  double l = 0.0;
  for (const auto& f : interface_faces) l += f.area;
  return l;
}

namespace {

bool on_grid(double x, double h, double tol = 1e-9) {
  double r = x / h;
  return std::abs(r - std::round(r)) <= tol;
}

}  // namespace

Mesh build_mesh(const Geometry& geometry, int resolution) {
  if (resolution < 2) throw ConfigError("build_mesh: resolution must be at least 2");
  const double h = 1.0 / resolution;

  for (Side s : {Side::Plus, Side::Minus})
    for (const Vec2& v : geometry.compartment(s).vertices)
      if (!on_grid(v[0], h) || !on_grid(v[1], h))
        throw ConfigError(
            "build_mesh: polygon vertex off the grid lines; choose a resolution that "
            "resolves all vertex coordinates");
  for (double u : {geometry.interface.lo, geometry.interface.hi})
    if (!on_grid(u, h))
      throw ConfigError(
          "build_mesh: interface endpoint off the grid lines; choose a resolution that "
          "resolves the interface span");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (Side s : {Side::Plus, Side::Minus})
    for (const Vec2& v : geometry.compartment(s).vertices) {
      xmin = std::min(xmin, v[0]);
      xmax = std::max(xmax, v[0]);
      ymin = std::min(ymin, v[1]);
      ymax = std::max(ymax, v[1]);
    }

  Mesh m;
  m.h = h;
  m.x0 = std::floor(xmin / h + 0.5) * h;
  m.y0 = std::floor(ymin / h + 0.5) * h;
  m.nx = static_cast<int>(std::round((xmax - m.x0) / h));
  m.ny = static_cast<int>(std::round((ymax - m.y0) / h));
  m.grid.assign(static_cast<std::size_t>(m.nx) * m.ny, -1);

  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      Vec2 c{m.x0 + (i + 0.5) * h, m.y0 + (j + 0.5) * h};
      bool in_plus = geometry.plus.contains(c);
      bool in_minus = geometry.minus.contains(c);
      if (!in_plus && !in_minus) continue;
      Mesh::Cell cell{in_plus ? Side::Plus : Side::Minus, c, h * h};
      m.grid[static_cast<std::size_t>(j) * m.nx + i] = m.n_cells();
      m.cells.push_back(cell);
    }
  }
  if (m.count(Side::Plus) == 0 || m.count(Side::Minus) == 0)
    throw ConfigError("build_mesh: a compartment received no cells");

  auto cell_index = [&](int i, int j) -> int {
    if (i < 0 || i >= m.nx || j < 0 || j >= m.ny) return -1;
    return m.grid[static_cast<std::size_t>(j) * m.nx + i];
  };

  // Faces: sweep each cell's east (axis 0) and north (axis 1) sides once.
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      int c = cell_index(i, j);
      if (c < 0) continue;
      const Vec2 cc = m.cells[c].center;
      for (int axis = 0; axis < 2; ++axis) {
        int ni = axis == 0 ? i + 1 : i;
        int nj = axis == 0 ? j : j + 1;
        int nb = cell_index(ni, nj);
        Vec2 fc = cc;
        fc[axis] += 0.5 * h;
        if (nb >= 0 && m.cells[nb].side == m.cells[c].side) {
          m.interior_faces.push_back({c, nb, axis, h, h, fc});
        } else if (nb >= 0) {
          // Opposite compartments: coupled through the interface where the
          // shared face lies on it, otherwise two no-flux boundary faces.
          bool on_gamma = geometry.interface.axis == axis &&
                          std::abs(fc[axis] - geometry.interface.offset) <= 1e-9 &&
                          fc[1 - axis] >= geometry.interface.lo - 1e-9 &&
                          fc[1 - axis] <= geometry.interface.hi + 1e-9;
          if (on_gamma) {
            int cp = m.cells[c].side == Side::Plus ? c : nb;
            int cm = m.cells[c].side == Side::Plus ? nb : c;
            m.interface_faces.push_back({cp, cm, h, fc});
          } else {
            m.boundary_faces.push_back({c, axis, h, fc});
            m.boundary_faces.push_back({nb, axis, h, fc});
          }
        } else {
          m.boundary_faces.push_back({c, axis, h, fc});
        }
      }
      // West/south sides bordering empty grid cells are domain boundary too.
      for (int axis = 0; axis < 2; ++axis) {
        int pi = axis == 0 ? i - 1 : i;
        int pj = axis == 0 ? j : j - 1;
        if (cell_index(pi, pj) < 0) {
          Vec2 fc = cc;
          fc[axis] -= 0.5 * h;
          m.boundary_faces.push_back({c, axis, h, fc});
        }
      }
    }
  }

  // Consistency: cell volumes must reproduce the polygon areas, and the
  // interface faces must tile the interface segment.
  for (Side s : {Side::Plus, Side::Minus}) {
    double va = m.compartment_volume(s);
    double pa = geometry.area(s);
    if (std::abs(va - pa) > 1e-10 * std::max(1.0, pa))
      throw ConfigError("build_mesh: cell volumes do not tile the compartment polygon; "
                        "the geometry is not representable at this resolution");
  }
  if (std::abs(m.interface_length() - geometry.interface.length()) >
      1e-10 * std::max(1.0, geometry.interface.length()))
    throw ConfigError("build_mesh: interface faces do not tile the interface segment");

  return m;
}

void write_mesh_csv(const Mesh& mesh, std::ostream& os) {
  os << "cell_id,compartment,center_x,center_y,volume\n";
  char buf[160];
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g\n", c, to_string(cell.side),
                  cell.center[0], cell.center[1], cell.volume);
    os << buf;
  }
}

}  // namespace crd
