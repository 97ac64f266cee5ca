#include "coupledrd/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace crd {

double Polygon::area() const {
  double a = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = vertices[i];
    const Vec2& q = vertices[(i + 1) % n];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

bool Polygon::contains(Vec2 p) const {
  // Even-odd rule with a horizontal ray.
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[j];
    if ((a[1] > p[1]) != (b[1] > p[1])) {
      double xi = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
      if (p[0] < xi) inside = !inside;
    }
  }
  return inside;
}

bool Polygon::rectilinear(double tol) const {
  for (auto [a, b] : edges()) {
    if (std::abs(a[0] - b[0]) > tol && std::abs(a[1] - b[1]) > tol) return false;
  }
  return true;
}

std::vector<std::pair<Vec2, Vec2>> Polygon::edges() const {
  std::vector<std::pair<Vec2, Vec2>> e;
  const std::size_t n = vertices.size();
  e.reserve(n);
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(vertices[i], vertices[(i + 1) % n]);
  return e;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double Polygon::boundary_distance(Vec2 p) const {
  double d = std::numeric_limits<double>::infinity();
  for (auto [a, b] : edges()) d = std::min(d, point_segment_distance(p, a, b));
  return d;
}

double InterfaceSegment::distance(Vec2 p) const {
  return point_segment_distance(p, endpoint_lo(), endpoint_hi());
}

Side Geometry::side_of(Vec2 p) const {
  return (p[interface.axis] - interface.offset) * plus_sign > 0.0 ? Side::Plus : Side::Minus;
}

Vec2 Geometry::mirror(Vec2 p) const {
  Vec2 q = p;
  q[interface.axis] = 2.0 * interface.offset - p[interface.axis];
  return q;
}

bool Geometry::on_interface(Vec2 p, double tol) const {
  return std::abs(p[interface.axis] - interface.offset) <= tol &&
         p[1 - interface.axis] >= interface.lo - tol && p[1 - interface.axis] <= interface.hi + tol;
}

namespace {

// True if segment [a,b] lies on the interface line within the interface span.
bool edge_on_interface(const InterfaceSegment& g, Vec2 a, Vec2 b, double tol = 1e-12) {
  if (std::abs(a[g.axis] - g.offset) > tol || std::abs(b[g.axis] - g.offset) > tol) return false;
  double u0 = std::min(a[1 - g.axis], b[1 - g.axis]);
  double u1 = std::max(a[1 - g.axis], b[1 - g.axis]);
  return u0 >= g.lo - tol && u1 <= g.hi + tol;
}

}  // namespace

std::vector<std::pair<Vec2, Vec2>> Geometry::outer_boundary(Side s) const {
  std::vector<std::pair<Vec2, Vec2>> out;
  for (auto [a, b] : compartment(s).edges()) {
    if (edge_on_interface(interface, a, b)) continue;
    // Split edges that partially overlap the interface (edge collinear with the
    // separating line but extending beyond the interface span).
    int ax = interface.axis;
    if (std::abs(a[ax] - interface.offset) <= 1e-12 && std::abs(b[ax] - interface.offset) <= 1e-12) {
      double u0 = a[1 - ax], u1 = b[1 - ax];
      double lo = std::min(u0, u1), hi = std::max(u0, u1);
      double clo = std::max(lo, interface.lo), chi = std::min(hi, interface.hi);
      if (clo < chi - 1e-12) {
        auto mk = [&](double u) {
          Vec2 p;
          p[ax] = interface.offset;
          p[1 - ax] = u;
          return p;
        };
        if (lo < clo - 1e-12) out.emplace_back(mk(lo), mk(clo));
        if (chi < hi - 1e-12) out.emplace_back(mk(chi), mk(hi));
        continue;
      }
    }
    out.emplace_back(a, b);
  }
  return out;
}

double Geometry::outer_boundary_distance(Vec2 p, Side s) const {
  double d = std::numeric_limits<double>::infinity();
  for (auto [a, b] : outer_boundary(s)) d = std::min(d, point_segment_distance(p, a, b));
  return d;
}

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

void validate(Geometry& g) {
  for (Side s : {Side::Plus, Side::Minus}) {
    const Polygon& poly = g.compartment(s);
    if (poly.vertices.size() < 3) throw ConfigError("geometry: degenerate compartment polygon");
    if (poly.area() <= 0.0)
      throw ConfigError("geometry: compartment polygon must be counter-clockwise with positive area");
    if (!poly.rectilinear())
      throw ConfigError("geometry: compartment polygons must be rectilinear (axis-aligned edges)");
  }
  if (g.interface.hi <= g.interface.lo) throw ConfigError("geometry: empty interface segment");

  // Separation: compartments on opposite sides of the separating line.
  int ax = g.interface.axis;
  double off = g.interface.offset;
  double pmin = 1e300, pmax = -1e300, mmin = 1e300, mmax = -1e300;
  for (const Vec2& v : g.plus.vertices) {
    pmin = std::min(pmin, v[ax]);
    pmax = std::max(pmax, v[ax]);
  }
  for (const Vec2& v : g.minus.vertices) {
    mmin = std::min(mmin, v[ax]);
    mmax = std::max(mmax, v[ax]);
  }
  const double tol = 1e-12;
  bool plus_above = pmin >= off - tol && mmax <= off + tol;
  bool plus_below = pmax <= off + tol && mmin >= off - tol;
  if (!plus_above && !plus_below)
    throw ConfigError("geometry: separating line fails to separate the compartments");
  g.plus_sign = plus_above ? 1.0 : -1.0;
  if ((plus_above && pmin > off + tol) || (plus_below && pmax < off - tol))
    throw ConfigError("geometry: interface does not touch the plus compartment");

  // Compartments must have disjoint interiors: with valid separation this
  // reduces to the shared line check above; detect the degenerate identical
  // polygon case explicitly.
  if (g.plus.vertices == g.minus.vertices)
    throw ConfigError("geometry: compartments overlap (identical polygons)");
  Vec2 probe = g.minus.vertices[0];
  bool any_minus_interior = false;
  for (const Vec2& v : g.minus.vertices) {
    Vec2 c = 0.5 * (v + probe);
    if (g.plus.contains(c)) {
      any_minus_interior = true;
      break;
    }
  }
  if (any_minus_interior) throw ConfigError("geometry: compartments overlap");

  // Every interface point must lie on both compartment boundaries.
  for (int k = 0; k <= 32; ++k) {
    Vec2 p = g.interface.point(k / 32.0);
    if (g.plus.boundary_distance(p) > 1e-9 || g.minus.boundary_distance(p) > 1e-9)
      throw ConfigError("geometry: interface segment is not shared by both compartment boundaries");
  }

  // Mirror symmetry detection (about the separating line).
  auto mirrored = g.minus.vertices;
  for (Vec2& v : mirrored) v[ax] = 2.0 * off - v[ax];
  auto key = [](const std::vector<Vec2>& vs) {
    std::vector<std::pair<double, double>> k;
    for (const Vec2& v : vs) k.emplace_back(v[0], v[1]);
    std::sort(k.begin(), k.end());
    return k;
  };
  g.mirror_symmetric = key(mirrored) == key(g.plus.vertices);
}

}  // namespace

Geometry flat_symmetric_geometry() {
  Geometry g;
  g.plus = rect(0.0, 0.0, 1.0, 1.0);
  g.minus = rect(-1.0, 0.0, 0.0, 1.0);
  g.interface = InterfaceSegment{0, 0.0, 0.0, 1.0};
  g.template_name = "flat_symmetric";
  validate(g);
  return g;
}

Geometry triple_junction_geometry() {
  Geometry g;
  g.plus = rect(0.0, 0.0, 1.0, 1.0);
  g.minus = rect(-1.0, 0.0, 0.0, 1.0);
  g.interface = InterfaceSegment{0, 0.0, 0.0, 0.5};
  g.template_name = "triple_junction";
  validate(g);
  return g;
}

Geometry build_geometry(const nlohmann::json& descriptor) {
  if (descriptor.is_string()) {
    return build_geometry(nlohmann::json{{"template", descriptor.get<std::string>()}});
  }
  if (descriptor.contains("template")) {
    std::string name = descriptor.at("template").get<std::string>();
    if (name == "flat_symmetric") return flat_symmetric_geometry();
    if (name == "triple_junction") return triple_junction_geometry();
    throw ConfigError("geometry: unknown template '" + name + "'");
  }

  Geometry g;
  auto read_poly = [&](const char* k) {
    Polygon p;
    for (const auto& v : descriptor.at(k)) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return p;
  };
  g.plus = read_poly("vertices_plus");
  g.minus = read_poly("vertices_minus");

  if (!descriptor.contains("interface_edges") || descriptor.at("interface_edges").empty())
    throw ConfigError("geometry: descriptor needs non-empty interface_edges (plus-polygon edge indices)");
  auto edges = g.plus.edges();
  int axis = -1;
  double offset = 0.0, lo = 1e300, hi = -1e300;
  for (const auto& je : descriptor.at("interface_edges")) {
    std::size_t i = je.get<std::size_t>();
    if (i >= edges.size()) throw ConfigError("geometry: interface edge index out of range");
    auto [a, b] = edges[i];
    int e_axis = std::abs(a[0] - b[0]) <= 1e-12 ? 0 : (std::abs(a[1] - b[1]) <= 1e-12 ? 1 : -1);
    if (e_axis < 0) throw ConfigError("geometry: interface edges must be axis-aligned");
    if (axis < 0) {
      axis = e_axis;
      offset = a[e_axis];
    } else if (e_axis != axis || std::abs(a[e_axis] - offset) > 1e-12) {
      throw ConfigError("geometry: interface edges must be collinear");
    }
    lo = std::min({lo, a[1 - axis], b[1 - axis]});
    hi = std::max({hi, a[1 - axis], b[1 - axis]});
  }
  g.interface = InterfaceSegment{axis, offset, lo, hi};
  g.template_name = "";
  validate(g);
  return g;
}

}  // namespace crd
