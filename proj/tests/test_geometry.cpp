#include "doctest.h"

#include "coupledrd/geometry.hpp"
#include "coupledrd/mesh.hpp"

#include <sstream>

using namespace crd;

TEST_CASE("flat template geometry") {
  Geometry g = flat_symmetric_geometry();
  CHECK(g.area(Side::Plus) == doctest::Approx(1.0));
  CHECK(g.area(Side::Minus) == doctest::Approx(1.0));
  CHECK(g.interface.length() == doctest::Approx(1.0));
  CHECK(g.mirror_symmetric);
  // The separating line extends the interface and splits the compartments.
  CHECK(g.side_of({0.5, 0.5}) == Side::Plus);
  CHECK(g.side_of({-0.5, 0.5}) == Side::Minus);
}

TEST_CASE("triple junction template geometry") {
  Geometry g = triple_junction_geometry();
  CHECK(g.interface.length() == doctest::Approx(0.5));
  CHECK(g.interface.endpoint_lo()[1] == doctest::Approx(0.0));
  CHECK(g.interface.endpoint_hi()[1] == doctest::Approx(0.5));
  // Above the interface endpoint both compartments expose outer boundary on
  // the separating line.
  double d_plus = g.outer_boundary_distance({0.0, 0.75}, Side::Plus);
  double d_minus = g.outer_boundary_distance({0.0, 0.75}, Side::Minus);
  CHECK(d_plus == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d_minus == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identical compartments rejected") {
  nlohmann::json desc{
      {"vertices_plus", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
      {"vertices_minus", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
      {"interface_edges", {3}}};
  CHECK_THROWS_AS(build_geometry(desc), ConfigError);
}

TEST_CASE("descriptor with explicit interface edges") {
  nlohmann::json desc{
      {"vertices_plus", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
      {"vertices_minus", {{-1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}, {-1.0, 1.0}}},
      {"interface_edges", {3}}};
  Geometry g = build_geometry(desc);
  CHECK(g.interface.axis == 0);
  CHECK(g.interface.length() == doctest::Approx(1.0));
  CHECK(g.mirror_symmetric);
}

TEST_CASE("mesh counts on the flat template") {
  Geometry g = flat_symmetric_geometry();
  Mesh m = build_mesh(g, 4);
  CHECK(m.count(Side::Plus) == 16);
  CHECK(m.count(Side::Minus) == 16);
  CHECK(m.interface_faces.size() == 4);
  CHECK(m.compartment_volume(Side::Plus) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.compartment_volume(Side::Minus) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(m.interface_length() - g.interface.length()) <= 1e-12);
}

TEST_CASE("mesh counts on the triple junction template") {
  Geometry g = triple_junction_geometry();
  Mesh m = build_mesh(g, 4);
  CHECK(m.interface_faces.size() == 2);
  CHECK(std::abs(m.interface_length() - 0.5) <= 1e-12);
  // Faces on the separating line above the junction are no-flux for both
  // compartments: every interface face center lies below y = 1/2.
  for (const auto& f : m.interface_faces) CHECK(f.center[1] < 0.5);
}

TEST_CASE("mesh resolution preconditions") {
  Geometry g = flat_symmetric_geometry();
  CHECK_THROWS_AS(build_mesh(g, 1), ConfigError);
  // Interface endpoint at 1/2 requires an even resolution.
  Geometry tj = triple_junction_geometry();
  CHECK_THROWS_AS(build_mesh(tj, 5), ConfigError);
  CHECK_NOTHROW(build_mesh(tj, 6));
}

TEST_CASE("mesh csv export") {
  Mesh m = build_mesh(flat_symmetric_geometry(), 2);
  std::ostringstream os;
  write_mesh_csv(m, os);
  std::string s = os.str();
  CHECK(s.find("cell_id,compartment,center_x,center_y,volume") == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + m.n_cells());
}
