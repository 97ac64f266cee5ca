#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coupledrd/core.hpp"

#include "json.hpp"

namespace crd {

/// Simple polygon, counter-clockwise, closed implicitly (last vertex connects
/// to the first). The mesher additionally requires all edges axis-aligned.
struct Polygon {
  std::vector<Vec2> vertices;

  double area() const;                 // signed shoelace area (positive for CCW)
  bool contains(Vec2 p) const;         // strict interior, even-odd rule
  bool rectilinear(double tol = 1e-12) const;
  double boundary_distance(Vec2 p) const;
  std::vector<std::pair<Vec2, Vec2>> edges() const;
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Axis-aligned straight interface segment: { x[axis] = offset } x [lo, hi]
/// in the transverse coordinate. The separating line extends it to the whole
/// plane.
struct InterfaceSegment {
  int axis = 0;      // coordinate frozen on the interface (0: vertical line)
  double offset = 0.0;
  double lo = 0.0, hi = 1.0;

  double length() const { return hi - lo; }
  Vec2 point(double s) const {  // s in [0,1] along the segment
    Vec2 p;
    p[axis] = offset;
    p[1 - axis] = lo + s * (hi - lo);
    return p;
  }
  Vec2 endpoint_lo() const { return point(0.0); }
  Vec2 endpoint_hi() const { return point(1.0); }
  double distance(Vec2 p) const;
};

/// Two-compartment geometry: disjoint polygonal compartments sharing the
/// interface segment on their boundaries, with the separating line playing
/// the role of the extended hypersurface.
struct Geometry {
  Polygon plus;
  Polygon minus;
  InterfaceSegment interface;
  // Sign such that the plus compartment lies in { x[axis]*plus_sign > offset*plus_sign }.
  double plus_sign = 1.0;
  std::string template_name;           // "flat_symmetric", "triple_junction", or ""
  bool mirror_symmetric = false;       // minus is the mirror image of plus

  const Polygon& compartment(Side s) const { return s == Side::Plus ? plus : minus; }
  double area(Side s) const { return compartment(s).area(); }
  Side side_of(Vec2 p) const;          // classification by the separating line
  Vec2 mirror(Vec2 p) const;           // reflection across the separating line
  bool on_interface(Vec2 p, double tol = 1e-12) const;
  /// Outer boundary of one compartment: all boundary edges minus the interface part.
  std::vector<std::pair<Vec2, Vec2>> outer_boundary(Side s) const;
  double outer_boundary_distance(Vec2 p, Side s) const;
};

/// Validates and builds a geometry from a JSON descriptor. The descriptor is
/// either {"template": "flat_symmetric" | "triple_junction"} or explicit
/// vertex lists with the interface given as edge indices of the plus polygon:
/// {"vertices_plus": [[x,y],...], "vertices_minus": [...], "interface_edges": [i,...]}.
Geometry build_geometry(const nlohmann::json& descriptor);

Geometry flat_symmetric_geometry();
Geometry triple_junction_geometry();

}  // namespace crd
