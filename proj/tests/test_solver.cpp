#include "doctest.h"

#include <cmath>

#include "coupledrd/diagnostics.hpp"
#include "coupledrd/scenario_io.hpp"
#include "coupledrd/solver.hpp"

using namespace crd;

namespace {

// Two well-mixed compartments: one cell each, one interface face.
Mesh two_cell_mesh() {
  Mesh m;
  m.h = 1.0;
  m.cells = {{Side::Plus, {0.5, 0.5}, 1.0}, {Side::Minus, {-0.5, 0.5}, 1.0}};
  m.interface_faces = {{0, 1, 1.0, {0.0, 0.5}}};
  m.x0 = -1.0;
  m.y0 = 0.0;
  m.nx = 2;
  m.ny = 1;
  m.grid = {1, 0};
  return m;
}

Scenario well_mixed_scenario() {
  Scenario sc;
  sc.name = "well_mixed";
  sc.geometry = flat_symmetric_geometry();
  sc.resolution = 2;
  sc.n_species = 1;
  sc.diffusion = DiffusionSpec::isotropic(1, 1.0, 1.0);
  sc.entropy.n = 1;
  TransmissionModel lin;
  lin.kind = TransmissionKind::Linear;
  lin.n = 1;
  lin.k_species = {1.0};
  sc.transmission = lin;
  sc.rates = make_rates(std::nullopt, sc.transmission, 1);
  sc.epsilon = 0.0;
  sc.dt_init = 1e-3;
  sc.t_end = 1.0;
  sc.output_every = 0.1;
  sc.initial = [](Side s, Vec2, std::span<double> out) {
    out[0] = s == Side::Plus ? 2.0 : 1.0;
  };
  return sc;
}

}  // namespace

TEST_CASE("diffusion operator basics") {
  Geometry g = flat_symmetric_geometry();
  Mesh mesh = build_mesh(g, 4);
  DiffusionSpec d = DiffusionSpec::isotropic(1, 1.0, 1.0);
  DiffusionOperator op(mesh, d, 0);

  // Constants lie in the kernel.
  std::vector<double> u(mesh.n_cells(), 3.7), out(mesh.n_cells());
  op.apply(u, out);
  for (double v : out) CHECK(std::abs(v) <= 1e-13);

  // Row sums vanish (flux form): apply to each unit vector and accumulate.
  std::vector<double> colsum(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::fill(u.begin(), u.end(), 0.0);
    u[c] = 1.0;
    op.apply(u, out);
    for (int r = 0; r < mesh.n_cells(); ++r) colsum[r] += out[r];
  }
  for (double v : colsum) CHECK(std::abs(v) <= 1e-12);

  // Five-point stencil on an interior cell: (sum of neighbours - 4 u) / h^2.
  int interior = -1;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 x = mesh.cells[c].center;
    if (std::abs(x[0] - 0.375) < 1e-12 && std::abs(x[1] - 0.375) < 1e-12) interior = c;
  }
  REQUIRE(interior >= 0);
  std::fill(u.begin(), u.end(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 x = mesh.cells[c].center;
    u[c] = x[0] * x[0];  // L u = 2 for the exact operator on quadratics
  }
  op.apply(u, out);
  CHECK(out[interior] == doctest::Approx(2.0));

  // Stencil row assembled column by column: 1/h^2 per neighbour, -4/h^2 at
  // the center, zero elsewhere.
  const double h2 = 0.25 * 0.25;
  Vec2 xc = mesh.cells[interior].center;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::fill(u.begin(), u.end(), 0.0);
    u[c] = 1.0;
    op.apply(u, out);
    double d = norm(mesh.cells[c].center - xc);
    if (c == interior) {
      CHECK(out[interior] == doctest::Approx(-4.0 / h2));
    } else if (d <= 0.25 + 1e-12) {
      CHECK(out[interior] == doctest::Approx(1.0 / h2));
    } else {
      CHECK(out[interior] == 0.0);
    }
  }
}

TEST_CASE("anisotropic diagonal diffusion") {
  Scenario sc = load_scenario("flat_linear");
  sc.resolution = 8;
  sc.t_end = 0.2;
  sc.diffusion.coeff.assign(1, {});
  sc.diffusion.coeff[0][static_cast<int>(Side::Plus)] = {0.2, 0.02};
  sc.diffusion.coeff[0][static_cast<int>(Side::Minus)] = {0.01, 0.1};
  CHECK(sc.diffusion.ellipticity() == 0.01);
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  Trajectory traj = Solver(sc, mesh).run();
  REQUIRE_FALSE(traj.aborted);
  double m0 = traj.ledger.front().mass_plus[0] + traj.ledger.front().mass_minus[0];
  double m1 = traj.ledger.back().mass_plus[0] + traj.ledger.back().mass_minus[0];
  CHECK(std::abs(m1 - m0) <= 1e-10 * m0);
  CHECK(entropy_inequality_check(traj).max_positive <= 1e-10);
}

TEST_CASE("flooring budget across the built-in scenarios") {
  for (const std::string& name : builtin_scenario_names()) {
    Scenario sc = load_scenario(name);
    sc.resolution = 8;
    sc.t_end = 0.2;
    Mesh mesh = build_mesh(sc.geometry, sc.resolution);
    Trajectory traj = Solver(sc, mesh).run();
    INFO(name);
    REQUIRE_FALSE(traj.aborted);
    double m0 = 0.0;
    for (double v : traj.ledger.front().mass_plus) m0 += v;
    for (double v : traj.ledger.front().mass_minus) m0 += v;
    CHECK(traj.ledger.back().floored_mass <= 1e-8 * m0);
    for (const StateField& s : traj.snapshots) CHECK(s.min_value() >= 0.0);
  }
}

TEST_CASE("interface faces carry no diffusive coupling") {
  Geometry g = flat_symmetric_geometry();
  Mesh mesh = build_mesh(g, 4);
  DiffusionOperator op(mesh, DiffusionSpec::isotropic(1, 1.0, 1.0), 0);
  // Piecewise-constant jump across the interface stays untouched.
  std::vector<double> u(mesh.n_cells()), out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c)
    u[c] = mesh.cells[c].side == Side::Plus ? 5.0 : -3.0;
  op.apply(u, out);
  for (double v : out) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("steady state is preserved") {
  Scenario sc = well_mixed_scenario();
  sc.initial = [](Side, Vec2, std::span<double> out) { out[0] = 1.5; };
  Mesh mesh = build_mesh(sc.geometry, 4);
  sc.resolution = 4;
  Solver solver(sc, mesh);
  StateField u = solver.initial_state();
  StateField v = solver.step(u, 1e-2);
  for (int c = 0; c < mesh.n_cells(); ++c) CHECK(v.at(c, 0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("two-cell relaxation matches the exact ODE") {
  Scenario sc = well_mixed_scenario();
  Mesh mesh = two_cell_mesh();
  Solver solver(sc, mesh);

  // du+/dt = -k (u+ - u-), du-/dt = +k (u+ - u-); exact solution relaxes the
  // gap with rate 2k while the mean stays put.
  StateField u(2, 1);
  u.at(0, 0) = 2.0;
  u.at(1, 0) = 1.0;
  double dt = 1e-3;
  StateField v = solver.step(u, dt);
  double gap0 = 1.0;
  double exact_plus = 1.5 + 0.5 * gap0 * std::exp(-2.0 * dt);
  CHECK(std::abs(v.at(0, 0) - exact_plus) <= 2.0 * dt * dt);
  CHECK(v.at(0, 0) + v.at(1, 0) == doctest::Approx(3.0).epsilon(1e-14));

  // Accumulated over many steps the error stays first order.
  StateField w(2, 1);
  w.at(0, 0) = 2.0;
  w.at(1, 0) = 1.0;
  for (int k = 0; k < 100; ++k) w = solver.step(w, dt);
  double t = 100 * dt;
  double exact_t = 1.5 + 0.5 * std::exp(-2.0 * t);
  CHECK(std::abs(w.at(0, 0) - exact_t) <= 5.0 * dt);
}

TEST_CASE("quasi-positive rates keep zero components non-negative") {
  Scenario sc = well_mixed_scenario();
  ReactionNetwork ab;
  ab.n = 2;
  ab.alpha = {1, 0};
  ab.beta = {0, 1};
  ab.k_plus = 1.0;
  ab.k_minus = 1.0;
  sc.n_species = 2;
  sc.network = ab;
  sc.transmission.reset();
  sc.rates = make_rates(sc.network, std::nullopt, 2);
  sc.diffusion = DiffusionSpec::isotropic(2, 0.5, 0.5);
  sc.entropy.n = 2;
  sc.initial = [](Side, Vec2 x, std::span<double> out) {
    out[0] = 1.0 + 0.2 * std::sin(4.0 * x[0]);
    out[1] = 0.0;  // starts on the boundary of the positive cone
  };
  sc.resolution = 8;
  Mesh mesh = build_mesh(sc.geometry, 8);
  Solver solver(sc, mesh);
  Solver::StepStats stats;
  StateField u = solver.initial_state();
  StateField v = solver.step(u, 1e-3, &stats);
  CHECK(v.min_value() >= 0.0);
  CHECK(stats.floored_mass <= 1e-12);

  // With no transmission the reaction invariant u1 + u2 is conserved per
  // compartment and the entropy is non-increasing.
  sc.t_end = 0.1;
  sc.initial = [](Side, Vec2 x, std::span<double> out) {
    out[0] = 1.0 + 0.2 * std::sin(4.0 * x[0]);
    out[1] = 0.5;
  };
  Trajectory traj = Solver(sc, mesh).run();
  REQUIRE_FALSE(traj.aborted);
  for (Side side : {Side::Plus, Side::Minus}) {
    const auto& first = traj.ledger.front();
    const auto& masses0 = side == Side::Plus ? first.mass_plus : first.mass_minus;
    double m0 = masses0[0] + masses0[1];
    for (const LedgerRow& row : traj.ledger) {
      const auto& m = side == Side::Plus ? row.mass_plus : row.mass_minus;
      CHECK(std::abs(m[0] + m[1] - m0) <= 1e-10 * m0);
    }
  }
  for (std::size_t k = 1; k < traj.ledger.size(); ++k)
    CHECK(traj.ledger[k].entropy <= traj.ledger[k - 1].entropy + 1e-12);
}

TEST_CASE("conservation in full runs") {
  Scenario sc = load_scenario("flat_linear");
  sc.resolution = 8;
  sc.t_end = 0.2;
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  Solver solver(sc, mesh);
  Trajectory traj = solver.run();
  REQUIRE_FALSE(traj.aborted);

  double m0 = traj.ledger.front().mass_plus[0] + traj.ledger.front().mass_minus[0];
  for (const LedgerRow& row : traj.ledger) {
    double m = row.mass_plus[0] + row.mass_minus[0];
    CHECK(std::abs(m - m0) <= 1e-10 * m0);
  }
  CHECK(traj.ledger.back().floored_mass <= 1e-8 * m0);
  // Diffusion plus linear transmission only: the entropy column is monotone.
  for (std::size_t k = 1; k < traj.ledger.size(); ++k)
    CHECK(traj.ledger[k].entropy <= traj.ledger[k - 1].entropy + 1e-12);

  // Interface trace gap shrinks under pure relaxation from a jump.
  Scenario jump = sc;
  jump.epsilon = 0.0;
  jump.initial = [](Side s, Vec2, std::span<double> out) {
    out[0] = s == Side::Plus ? 1.0 : 2.0;
  };
  Solver jsolver(jump, mesh);
  StateField u = jsolver.initial_state();
  auto tr_p0 = jsolver.interface_trace(u, Side::Plus);
  auto tr_m0 = jsolver.interface_trace(u, Side::Minus);
  CHECK(tr_p0[0] == 1.0);
  CHECK(tr_m0[0] == 2.0);
  StateField v = jsolver.step(u, 1e-2);
  auto tr_p1 = jsolver.interface_trace(v, Side::Plus);
  auto tr_m1 = jsolver.interface_trace(v, Side::Minus);
  for (std::size_t f = 0; f < tr_p1.size(); ++f) {
    double gap0 = std::abs(tr_m0[f] - tr_p0[f]);
    double gap1 = std::abs(tr_m1[f] - tr_p1[f]);
    CHECK(gap1 < gap0);
  }
}

TEST_CASE("stoichiometric invariant with bulk reactions") {
  Scenario sc = load_scenario("flat_polynomial");
  sc.resolution = 8;
  sc.t_end = 0.2;
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  Trajectory traj = Solver(sc, mesh).run();
  REQUIRE_FALSE(traj.aborted);
  // alpha - beta = (1,-1) and gamma - delta = (1,-1): u1 + u2 over both
  // compartments is conserved.
  double m0 = 0.0;
  for (double v : {traj.ledger.front().mass_plus[0], traj.ledger.front().mass_plus[1],
                   traj.ledger.front().mass_minus[0], traj.ledger.front().mass_minus[1]})
    m0 += v;
  for (const LedgerRow& row : traj.ledger) {
    double m = row.mass_plus[0] + row.mass_plus[1] + row.mass_minus[0] + row.mass_minus[1];
    CHECK(std::abs(m - m0) <= 1e-10 * m0);
  }
  // Entropy is non-increasing along the run.
  for (std::size_t k = 1; k < traj.ledger.size(); ++k)
    CHECK(traj.ledger[k].entropy <= traj.ledger[k - 1].entropy + 1e-10);
}

TEST_CASE("dt underflow aborts") {
  Scenario sc = well_mixed_scenario();
  // Explosive rates with a dt floor equal to the initial step force the cap
  // to fail immediately.
  RatePack stiff;
  stiff.n = 1;
  stiff.f = [](Side, std::span<const double> u, std::span<double> f) { f[0] = 1e12 * (1.0 + u[0]); };
  sc.rates = stiff;
  sc.transmission.reset();
  sc.epsilon = 0.0;
  sc.dt_init = 1e-3;
  sc.dt_min = 0.9e-3;
  sc.resolution = 4;
  Mesh mesh = build_mesh(sc.geometry, 4);
  Trajectory traj = Solver(sc, mesh).run();
  CHECK(traj.aborted);
  CHECK(traj.abort_reason.find("underflow") != std::string::npos);
}

TEST_CASE("epsilon consistency of trajectories") {
  Scenario base = load_scenario("flat_polynomial");
  base.resolution = 8;
  base.t_end = 0.25;
  Mesh mesh = build_mesh(base.geometry, base.resolution);

  std::vector<Trajectory> runs;
  for (double eps : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    Scenario sc = base;
    sc.epsilon = eps;
    runs.push_back(Solver(sc, mesh).run());
  }
  double prev = 1e300;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    double d = 0.0;
    for (std::size_t s = 0; s < runs[k].snapshots.size(); ++s)
      d = std::max(d, sup_distance(runs[k].snapshots[s], runs[k + 1].snapshots[s]));
    CHECK(d < prev);
    prev = d;
  }
}
