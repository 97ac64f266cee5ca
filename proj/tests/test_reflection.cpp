#include "doctest.h"

#include <random>

#include "coupledrd/reflection.hpp"
#include "coupledrd/partition.hpp"
#include "coupledrd/scenario_io.hpp"

using namespace crd;

namespace {

// Non-symmetric rectilinear geometry: the minus compartment steps inward
// above the interface, so the two height functions genuinely differ away
// from the interface while agreeing on it.
Geometry stepped_geometry() {
  nlohmann::json desc{
      {"vertices_plus", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
      {"vertices_minus",
       {{-1.0, 0.0}, {0.0, 0.0}, {0.0, 0.75}, {-0.5, 0.75}, {-0.5, 1.0}, {-1.0, 1.0}}},
      {"interface_edges", {3}}};
  nlohmann::json desc_fixed = desc;
  // interface: lower half of the plus left edge
  desc_fixed["vertices_plus"] = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.5}};
  desc_fixed["interface_edges"] = {4};
  return build_geometry(desc_fixed);
}

}  // namespace

TEST_CASE("flat template map is the global mirror") {
  Geometry g = flat_symmetric_geometry();
  ReflectionMap map = reflection_map(g, {0.0, 0.5}, 8.0);
  CHECK(map.kind() == ReflectionMap::Kind::FlatMirror);
  Vec2 y = map.apply({0.3, 0.5});
  CHECK(y[0] == doctest::Approx(-0.3));
  CHECK(y[1] == doctest::Approx(0.5));
  // Interface points are fixed.
  Vec2 z = map.apply({0.0, 0.25});
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.25);
  CHECK_THROWS_AS(map.apply({100.0, 0.5}), std::domain_error);
}

TEST_CASE("involution on random samples") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.0, 1.0);
  Geometry flat = flat_symmetric_geometry();
  Geometry tj = triple_junction_geometry();
  ReflectionMap flat_map = reflection_map(flat, {0.0, 0.5}, 8.0);
  ReflectionMap tj_map = reflection_map(tj, tj.interface.endpoint_hi(), 0.15);
  CHECK(tj_map.kind() == ReflectionMap::Kind::Hypograph);

  int tested = 0;
  for (int k = 0; k < 20000 && tested < 1000; ++k) {
    Vec2 p{ux(rng), uy(rng)};
    if (!flat.plus.contains(p) && !flat.minus.contains(p)) continue;
    Vec2 q = flat_map.apply(flat_map.apply(p));
    CHECK(norm(q - p) <= 1e-12);
    if (tj_map.in_neighbourhood(p)) {
      Vec2 r = tj_map.apply(tj_map.apply(p));
      CHECK(norm(r - p) <= 1e-12);
      ++tested;
    }
    ++tested;
  }
  CHECK(tested >= 1000);
}

TEST_CASE("verify_reflection on both templates") {
  Geometry flat = flat_symmetric_geometry();
  ReflectionMap fm = reflection_map(flat, {0.0, 0.5}, 8.0);
  ReflectionReport fr = verify_reflection(fm, flat, 1000, 1e-3);
  CHECK(fr.involution_defect <= 1e-10);
  CHECK(fr.interface_fixed_defect <= 1e-10);
  CHECK(fr.det_defect <= 1e-10);
  CHECK(fr.boundary_map_defect <= 1e-10);

  Geometry tj = triple_junction_geometry();
  ReflectionMap tm = reflection_map(tj, tj.interface.endpoint_hi(), 0.15);
  ReflectionReport tr = verify_reflection(tm, tj, 1000, 1e-3);
  CHECK(tr.involution_defect <= 1e-10);
  CHECK(tr.interface_fixed_defect <= 1e-10);
  CHECK(tr.det_defect <= 1e-6);
  CHECK(tr.boundary_map_defect <= 1e-9);
  CHECK(tr.det_samples > 100);
}

TEST_CASE("hypograph map with genuinely distinct height functions") {
  Geometry g = stepped_geometry();
  CHECK_FALSE(g.mirror_symmetric);
  ReflectionMap map = reflection_map(g, g.interface.endpoint_hi(), 0.15);
  CHECK(map.kind() == ReflectionMap::Kind::Hypograph);

  // The shear is nontrivial: eta1 and eta2 differ on the outer-boundary side.
  bool differ = false;
  for (double y = 0.05; y <= 0.18; y += 0.01)
    if (std::abs(map.eta1().eval(y) - map.eta2().eval(y)) > 1e-6) differ = true;
  CHECK(differ);

  ReflectionReport rep = verify_reflection(map, g, 1000, 1e-3);
  CHECK(rep.involution_defect <= 1e-10);
  CHECK(rep.interface_fixed_defect <= 1e-10);
  CHECK(rep.det_defect <= 1e-6);
  CHECK(rep.boundary_map_defect <= 1e-9);
}

TEST_CASE("hypograph map at a low-endpoint junction") {
  // Interface on the upper half of the shared boundary with the junction at
  // its lower endpoint; the frame runs in the opposite orientation compared
  // with the stepped geometry above.
  nlohmann::json desc{
      {"vertices_plus", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.5}}},
      {"vertices_minus",
       {{-1.0, 0.0}, {-0.5, 0.0}, {-0.5, 0.25}, {0.0, 0.25}, {0.0, 1.0}, {-1.0, 1.0}}},
      {"interface_edges", {3}}};
  Geometry g = build_geometry(desc);
  CHECK(g.interface.lo == doctest::Approx(0.5));
  CHECK(g.interface.hi == doctest::Approx(1.0));
  CHECK_FALSE(g.mirror_symmetric);

  ReflectionMap map = reflection_map(g, g.interface.endpoint_lo(), 0.15);
  CHECK(map.kind() == ReflectionMap::Kind::Hypograph);
  ReflectionReport rep = verify_reflection(map, g, 1000, 1e-3);
  CHECK(rep.involution_defect <= 1e-10);
  CHECK(rep.interface_fixed_defect <= 1e-10);
  CHECK(rep.det_defect <= 1e-6);
  CHECK(rep.boundary_map_defect <= 1e-9);
}

TEST_CASE("mismatched height functions break the interface fixing") {
  Geometry tj = triple_junction_geometry();
  ReflectionMap map = reflection_map(tj, tj.interface.endpoint_hi(), 0.15);
  map.corrupt_eta1_for_test(0.05);
  ReflectionReport rep = verify_reflection(map, tj, 1000, 1e-3);
  CHECK(rep.interface_fixed_defect > 1e-3);
}

TEST_CASE("extension fails without reflected mesh coverage") {
  Geometry tj = triple_junction_geometry();
  Mesh mesh = build_mesh(tj, 8);
  ReflectionMap map = reflection_map(tj, tj.interface.endpoint_hi(), 0.15);
  // A heavily skewed height function throws reflected centers out of the
  // mesh footprint.
  map.corrupt_eta1_for_test(20.0);
  StateField u(mesh.n_cells(), 1, 1.0);
  CHECK_THROWS_AS(extend_field(u, map, mesh), std::runtime_error);
}

TEST_CASE("analytic jacobian matches finite differences") {
  Geometry g = stepped_geometry();
  ReflectionMap map = reflection_map(g, g.interface.endpoint_hi(), 0.15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.12, 0.12);
  const double h = 1e-6;
  int tested = 0;
  while (tested < 50) {
    Vec2 p = map.anchor() + Vec2{u(rng), u(rng)};
    if (!g.plus.contains(p) && !g.minus.contains(p)) continue;
    if (map.kink_distance(p) < 3 * h || map.separating_line_distance(p) < 3 * h) continue;
    if (norm(p - map.anchor()) + 3 * h > map.radius()) continue;
    Mat2 J = map.jacobian(p);
    for (int j = 0; j < 2; ++j) {
      Vec2 e{};
      e[j] = h;
      Vec2 fp = map.apply(p + e), fm = map.apply(p - e);
      CHECK(J(0, j) == doctest::Approx((fp[0] - fm[0]) / (2 * h)).epsilon(1e-6));
      CHECK(J(1, j) == doctest::Approx((fp[1] - fm[1]) / (2 * h)).epsilon(1e-6));
    }
    CHECK(std::abs(std::abs(J.det()) - 1.0) <= 1e-12);
    ++tested;
  }
}

TEST_CASE("extend_field on the flat template") {
  Geometry g = flat_symmetric_geometry();
  Mesh mesh = build_mesh(g, 8);
  ReflectionMap map = reflection_map(g, {0.0, 0.5}, 8.0);

  StateField u(mesh.n_cells(), 1);
  for (int c = 0; c < mesh.n_cells(); ++c)
    u.at(c, 0) = mesh.cells[c].side == Side::Minus ? 3.25 : mesh.cells[c].center[0];

  ExtendedField ext = extend_field(u, map, mesh);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    REQUIRE(ext.valid[c] == 1);
    if (mesh.cells[c].side == Side::Plus) {
      CHECK(ext.cell(c)[0] == 3.25);  // constant opposite field copies exactly
    } else {
      // Mirror of the linear field x -> x1: the reflected center value.
      CHECK(ext.cell(c)[0] == doctest::Approx(-mesh.cells[c].center[0]));
    }
  }

  // Trace consistency: interface-adjacent values swap sides exactly.
  for (const auto& f : mesh.interface_faces)
    CHECK(ext.cell(f.cell_plus)[0] == u.at(f.cell_minus, 0));

  // Discrete involution: extending the extension restores the original.
  StateField v(mesh.n_cells(), 1);
  for (int c = 0; c < mesh.n_cells(); ++c) v.at(c, 0) = ext.cell(c)[0];
  ExtendedField ext2 = extend_field(v, map, mesh);
  for (int c = 0; c < mesh.n_cells(); ++c) CHECK(ext2.cell(c)[0] == u.at(c, 0));
}

TEST_CASE("partition of unity identity and coverage") {
  Geometry g = flat_symmetric_geometry();
  std::vector<Vec2> anchors;
  std::vector<double> radii;
  default_anchors(g, anchors, radii);
  PartitionOfUnity pou = PartitionOfUnity::build(g, anchors, radii);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    Vec2 p{ux(rng), uy(rng)};
    double s = pou.phi_out(p);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    for (std::size_t b = 0; b < pou.size(); ++b) {
      double phi = pou.phi(b, p);
      CHECK(phi >= 0.0);
      CHECK(phi <= 1.0);
      // Support containment: nonzero weight only inside the neighbourhood.
      if (norm(p - pou.anchor(b).beta) > pou.anchor(b).radius + 1e-12) CHECK(phi == 0.0);
      s += phi;
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  // The outer weight vanishes on the interface.
  for (int k = 0; k <= 1000; ++k) CHECK(pou.phi_out(g.interface.point(k / 1000.0)) == 0.0);

  // Single anchor covering the whole interface.
  PartitionOfUnity single = PartitionOfUnity::build(g, {{0.0, 0.5}}, {0.8});
  for (int k = 0; k <= 1000; ++k) {
    Vec2 z = g.interface.point(k / 1000.0);
    CHECK(std::abs(single.phi_out(z) + single.phi(0, z) - 1.0) <= 1e-12);
  }

  // Anchors leaving a gap are rejected with a coverage error.
  CHECK_THROWS_AS(PartitionOfUnity::build(g, {{0.0, 0.1}}, {0.2}), ConfigError);
}
