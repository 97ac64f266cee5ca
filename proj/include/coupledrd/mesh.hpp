#pragma once

#include <iosfwd>
#include <vector>

#include "coupledrd/geometry.hpp"

namespace crd {

/// Structured finite-volume mesh over both compartments. Cells are square,
/// aligned with the grid, and tagged by compartment; interface faces pair one
/// plus cell with one minus cell and exactly tile the interface segment.
struct Mesh {
  struct Cell {
    Side side;
    Vec2 center;
    double volume;
  };
  struct InteriorFace {
    int c0, c1;     // same-compartment neighbours
    int axis;       // normal direction
    double area;    // face length
    double dist;    // center-to-center distance
    Vec2 center;
  };
  struct InterfaceFace {
    int cell_plus, cell_minus;
    double area;
    Vec2 center;
  };
  struct BoundaryFace {
    int cell;
    int axis;
    double area;
    Vec2 center;
  };

  double h = 0.0;
  std::vector<Cell> cells;
  std::vector<InteriorFace> interior_faces;
  std::vector<InterfaceFace> interface_faces;
  std::vector<BoundaryFace> boundary_faces;

  // Grid index for point location.
  double x0 = 0.0, y0 = 0.0;
  int nx = 0, ny = 0;
  std::vector<int> grid;  // nx*ny entries, cell index or -1

  int n_cells() const { return static_cast<int>(cells.size()); }
  int cell_at(Vec2 p) const;  // containing cell, or -1
  int count(Side s) const;
  double compartment_volume(Side s) const;
  double interface_length() const;
};

/// Builds the conforming mesh at the given resolution (cells per unit length).
/// Fails if the geometry is not representable on the grid (a polygon vertex or
/// interface endpoint off the grid lines).
Mesh build_mesh(const Geometry& geometry, int resolution);

void write_mesh_csv(const Mesh& mesh, std::ostream& os);

}  // namespace crd
