#include "coupledrd/residual.hpp"

#include <algorithm>
#include <cmath>

namespace crd {

double SpaceTimeBump::support_distance_to(Vec2 p) const {
  double dx = std::max({x_lo() - p[0], 0.0, p[0] - x_hi()});
  double dy = std::max({y_lo() - p[1], 0.0, p[1] - y_hi()});
  return std::hypot(dx, dy);
}

double SpaceTimeBump::max_support_distance_from(Vec2 p) const {
  double d = 0.0;
  for (double cx : {x_lo(), x_hi()})
    for (double cy : {y_lo(), y_hi()}) d = std::max(d, norm(Vec2{cx, cy} - p));
  return d;
}

namespace {

double face_diffusivity(const Scenario& sc, const Mesh& mesh, const Mesh::InteriorFace& f,
                        int species) {
  double a0 = sc.diffusion.value(species, mesh.cells[f.c0].side, f.axis);
  double a1 = sc.diffusion.value(species, mesh.cells[f.c1].side, f.axis);
  return 2.0 * a0 * a1 / (a0 + a1);
}

}  // namespace

double renorm_residual_outer(const Trajectory& traj, const Mesh& mesh, const Scenario& scenario,
                             const SmoothTestFunction& zeta, const SpaceTimeBump& psi,
                             Side sigma) {
  const int n = scenario.n_species;
  if (zeta.dim != n) throw std::invalid_argument("renorm_residual_outer: truncation dimension");
  {
    // The test function must stay away from the interface: exact distance
    // between the interface segment and the support box.
    const InterfaceSegment& gamma = scenario.geometry.interface;
    double lo_n = gamma.axis == 0 ? psi.x_lo() : psi.y_lo();
    double hi_n = gamma.axis == 0 ? psi.x_hi() : psi.y_hi();
    double lo_t = gamma.axis == 0 ? psi.y_lo() : psi.x_lo();
    double hi_t = gamma.axis == 0 ? psi.y_hi() : psi.x_hi();
    double dn = std::max({lo_n - gamma.offset, gamma.offset - hi_n, 0.0});
    double dt_ = std::max({lo_t - gamma.hi, gamma.lo - hi_t, 0.0});
    if (std::hypot(dn, dt_) <= 0.0)
      throw std::invalid_argument(
          "renorm_residual_outer: test-function support touches the interface");
  }

  RegularizedModel model = scenario.regularized();
  const std::size_t K = traj.snapshots.size();
  if (K < 2) throw std::invalid_argument("renorm_residual_outer: need at least two snapshots");

  // Per-snapshot caches of zeta(u_c) and D zeta(u_c) on the sigma cells.
  std::vector<double> val0(mesh.n_cells()), val1(mesh.n_cells());
  std::vector<double> grad0(static_cast<std::size_t>(mesh.n_cells()) * n),
      grad1(static_cast<std::size_t>(mesh.n_cells()) * n);
  std::vector<double> feps(static_cast<std::size_t>(n));

  auto fill_cache = [&](const StateField& s, std::vector<double>& val, std::vector<double>& grad) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].side != sigma) continue;
      val[static_cast<std::size_t>(c)] = zeta.value(s.cell(c));
      zeta.gradient(s.cell(c),
                    std::span<double>(grad.data() + static_cast<std::size_t>(c) * n,
                                      static_cast<std::size_t>(n)));
    }
  };

  // Right-hand side at one snapshot: gradient term plus reaction term.
  auto rhs_at = [&](const StateField& s, const std::vector<double>& grad, double t) {
    double acc = 0.0;
    for (const auto& f : mesh.interior_faces) {
      if (mesh.cells[f.c0].side != sigma) continue;
      Vec2 xf = f.center;
      double psif = psi.value(t, xf);
      double dpsin = psi.grad_x(t, xf)[f.axis];
      if (psif == 0.0 && dpsin == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        double g0 = grad[static_cast<std::size_t>(f.c0) * n + i];
        double g1 = grad[static_cast<std::size_t>(f.c1) * n + i];
        double dw = dpsin * 0.5 * (g0 + g1) + psif * (g1 - g0) / f.dist;
        double du = s.at(f.c1, i) - s.at(f.c0, i);
        acc -= f.area * face_diffusivity(scenario, mesh, f, i) * dw * du;
      }
    }
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].side != sigma) continue;
      double psic = psi.value(t, mesh.cells[c].center);
      if (psic == 0.0) continue;
      model.f_eps(sigma, s.cell(c), feps);
      double dot = 0.0;
      for (int i = 0; i < n; ++i)
        dot += grad[static_cast<std::size_t>(c) * n + i] * feps[static_cast<std::size_t>(i)];
      acc += psic * dot;
    }
    return acc;
  };

  fill_cache(traj.snapshots[0], val0, grad0);
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_prev = rhs_at(traj.snapshots[0], grad0, traj.snapshots[0].time);

  for (std::size_t k = 0; k + 1 < K; ++k) {
    const StateField& s1 = traj.snapshots[k + 1];
    fill_cache(s1, val1, grad1);
    double t0 = traj.snapshots[k].time, t1 = s1.time;
    double dt = t1 - t0;

    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].side != sigma) continue;
      Vec2 x = mesh.cells[c].center;
      double pm = 0.5 * (psi.value(t0, x) + psi.value(t1, x));
      if (pm == 0.0) continue;
      std::size_t q = static_cast<std::size_t>(c);
      lhs += mesh.cells[c].volume * pm * (val1[q] - val0[q]);
    }
    double rhs_next = rhs_at(s1, grad1, t1);
    rhs += 0.5 * dt * (rhs_prev + rhs_next);
    rhs_prev = rhs_next;
    val0.swap(val1);
    grad0.swap(grad1);
  }
  return lhs - rhs;
}

double weak_residual_outer(const Trajectory& traj, const Mesh& mesh, const Scenario& scenario,
                           int species, const SpaceTimeBump& psi, Side sigma) {
  const int n = scenario.n_species;
  RegularizedModel model = scenario.regularized();
  const std::size_t K = traj.snapshots.size();
  std::vector<double> feps(static_cast<std::size_t>(n));

  auto rhs_at = [&](const StateField& s, double t) {
    double acc = 0.0;
    for (const auto& f : mesh.interior_faces) {
      if (mesh.cells[f.c0].side != sigma) continue;
      double dpsin = psi.grad_x(t, f.center)[f.axis];
      if (dpsin == 0.0) continue;
      double du = s.at(f.c1, species) - s.at(f.c0, species);
      acc -= f.area * face_diffusivity(scenario, mesh, f, species) * dpsin * du;
    }
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].side != sigma) continue;
      double psic = psi.value(t, mesh.cells[c].center);
      if (psic == 0.0) continue;
      model.f_eps(sigma, s.cell(c), feps);
      acc += psic * feps[static_cast<std::size_t>(species)];
    }
    return acc;
  };

  double lhs = 0.0, rhs = 0.0;
  double rhs_prev = rhs_at(traj.snapshots[0], traj.snapshots[0].time);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const StateField& s0 = traj.snapshots[k];
    const StateField& s1 = traj.snapshots[k + 1];
    double t0 = s0.time, t1 = s1.time;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      if (mesh.cells[c].side != sigma) continue;
      Vec2 x = mesh.cells[c].center;
      double pm = 0.5 * (psi.value(t0, x) + psi.value(t1, x));
      if (pm == 0.0) continue;
      lhs += mesh.cells[c].volume * pm * (s1.at(c, species) - s0.at(c, species));
    }
    double rhs_next = rhs_at(s1, t1);
    rhs += 0.5 * (t1 - t0) * (rhs_prev + rhs_next);
    rhs_prev = rhs_next;
  }
  return lhs - rhs;
}

double renorm_residual_interface(const Trajectory& traj, const Mesh& mesh,
                                 const Scenario& scenario, const SmoothTestFunction& xi,
                                 const ReflectionMap& map, const SpaceTimeBump& psi, Side sigma) {
  const int n = scenario.n_species;
  if (xi.dim != 2 * n)
    throw std::invalid_argument("renorm_residual_interface: truncation must act on 2n variables");
  if (psi.max_support_distance_from(map.anchor()) + 2.0 * mesh.h > map.radius())
    throw std::invalid_argument(
        "renorm_residual_interface: test-function support (plus the stencil margin) exceeds "
        "the map neighbourhood");

  RegularizedModel model = scenario.regularized();
  const std::size_t K = traj.snapshots.size();

  // Mirror-cell lookup for cells of either compartment inside the support,
  // with a two-cell margin so every face with test-function activity has both
  // neighbours cached.
  const int nc = mesh.n_cells();
  std::vector<int> mirror(static_cast<std::size_t>(nc), -1);
  std::vector<char> needed(static_cast<std::size_t>(nc), 0);
  for (int c = 0; c < nc; ++c) {
    Vec2 x = mesh.cells[c].center;
    if (psi.support_distance_to(x) > 2.0 * mesh.h) continue;
    needed[static_cast<std::size_t>(c)] = 1;
    if (!map.in_neighbourhood(x))
      throw std::runtime_error("renorm_residual_interface: support cell outside the map "
                               "neighbourhood");
    int mc = mesh.cell_at(map.apply(x));
    if (mc < 0)
      throw std::runtime_error("renorm_residual_interface: missing reflected coverage");
    mirror[static_cast<std::size_t>(c)] = mc;
  }

  // Stacked state (u, reflected u) per cell; entries only where needed.
  std::vector<double> w0(static_cast<std::size_t>(nc) * 2 * n),
      w1(static_cast<std::size_t>(nc) * 2 * n);
  std::vector<double> xival0(static_cast<std::size_t>(nc)), xival1(static_cast<std::size_t>(nc));
  std::vector<double> xigrad0(static_cast<std::size_t>(nc) * 2 * n),
      xigrad1(static_cast<std::size_t>(nc) * 2 * n);

  auto fill = [&](const StateField& s, std::vector<double>& w, std::vector<double>& val,
                  std::vector<double>& grad) {
    for (int c = 0; c < nc; ++c) {
      std::size_t q = static_cast<std::size_t>(c);
      if (!needed[q]) continue;
      int mc = mirror[q];
      for (int i = 0; i < n; ++i) {
        w[q * 2 * n + i] = s.at(c, i);
        w[q * 2 * n + n + i] = s.at(mc, i);
      }
      std::span<const double> wc(w.data() + q * 2 * n, static_cast<std::size_t>(2 * n));
      val[q] = xi.value(wc);
      xi.gradient(wc, std::span<double>(grad.data() + q * 2 * n, static_cast<std::size_t>(2 * n)));
    }
  };

  std::vector<double> rate(static_cast<std::size_t>(n)), feps(static_cast<std::size_t>(n));
  std::vector<double> wface(static_cast<std::size_t>(2 * n)),
      gface(static_cast<std::size_t>(2 * n));

  // One evaluation of all right-hand-side terms at a snapshot.
  auto rhs_at = [&](const StateField& s, const std::vector<double>& grad, double t) {
    double acc = 0.0;

    // Bulk gradient terms, direct (sigma side, first-block derivatives) and
    // composed (opposite side, second-block derivatives through the map).
    for (const auto& f : mesh.interior_faces) {
      Side fs = mesh.cells[f.c0].side;
      std::size_t q0 = static_cast<std::size_t>(f.c0), q1 = static_cast<std::size_t>(f.c1);
      if (!needed[q0] || !needed[q1]) continue;
      Vec2 xf = f.center;
      if (fs == sigma) {
        double psif = psi.value(t, xf);
        double dpsin = psi.grad_x(t, xf)[f.axis];
        if (psif == 0.0 && dpsin == 0.0) continue;
        for (int i = 0; i < n; ++i) {
          double g0 = grad[q0 * 2 * n + i];
          double g1 = grad[q1 * 2 * n + i];
          double dw = dpsin * 0.5 * (g0 + g1) + psif * (g1 - g0) / f.dist;
          double du = s.at(f.c1, i) - s.at(f.c0, i);
          acc -= f.area * face_diffusivity(scenario, mesh, f, i) * dw * du;
        }
      } else {
        // Composed factor (psi D_{i+n} xi) o Phi evaluated via mirror cells;
        // the normal derivative of psi o Phi uses the map Jacobian.
        Vec2 xm = map.apply(xf);
        double psif = psi.value(t, xm);
        Vec2 gpsi = psi.grad_x(t, xm);
        Mat2 J = map.jacobian(xf);
        double dpsin = J.apply_transpose(gpsi)[f.axis];
        if (psif == 0.0 && dpsin == 0.0) continue;
        std::size_t m0 = static_cast<std::size_t>(mirror[q0]);
        std::size_t m1 = static_cast<std::size_t>(mirror[q1]);
        for (int i = 0; i < n; ++i) {
          double g0 = grad[m0 * 2 * n + n + i];
          double g1 = grad[m1 * 2 * n + n + i];
          double dw = dpsin * 0.5 * (g0 + g1) + psif * (g1 - g0) / f.dist;
          double du = s.at(f.c1, i) - s.at(f.c0, i);
          acc -= f.area * face_diffusivity(scenario, mesh, f, i) * dw * du;
        }
      }
    }

    // Interface transmission terms: both trace factors reduce to the stacked
    // trace pair because the map fixes the interface pointwise.
    for (const auto& face : mesh.interface_faces) {
      double psif = psi.value(t, face.center);
      if (psif == 0.0) continue;
      int cs = sigma == Side::Plus ? face.cell_plus : face.cell_minus;
      int co = sigma == Side::Plus ? face.cell_minus : face.cell_plus;
      model.r_eps(s.cell(face.cell_plus), s.cell(face.cell_minus), rate);
      double rsign = sigma == Side::Plus ? 1.0 : -1.0;  // r^sigma = +-r
      for (int i = 0; i < n; ++i) {
        wface[static_cast<std::size_t>(i)] = s.at(cs, i);
        wface[static_cast<std::size_t>(n + i)] = s.at(co, i);
      }
      xi.gradient(wface, gface);
      double term = 0.0;
      for (int i = 0; i < n; ++i) {
        std::size_t q = static_cast<std::size_t>(i);
        term += gface[q] * (rsign * rate[q]);        // D_i xi r_i^sigma
        term += gface[static_cast<std::size_t>(n + i)] * (-rsign * rate[q]);  // D_{i+n} xi r_i^{-sigma}
      }
      acc -= face.area * psif * term;
    }

    // Reaction terms, direct and composed.
    for (int c = 0; c < nc; ++c) {
      std::size_t q = static_cast<std::size_t>(c);
      if (!needed[q]) continue;
      Side cs = mesh.cells[c].side;
      if (cs == sigma) {
        double psic = psi.value(t, mesh.cells[c].center);
        if (psic == 0.0) continue;
        model.f_eps(cs, s.cell(c), feps);
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += grad[q * 2 * n + i] * feps[static_cast<std::size_t>(i)];
        acc += psic * mesh.cells[c].volume * dot;
      } else {
        Vec2 xm = map.apply(mesh.cells[c].center);
        double psic = psi.value(t, xm);
        if (psic == 0.0) continue;
        model.f_eps(cs, s.cell(c), feps);
        std::size_t mq = static_cast<std::size_t>(mirror[q]);
        double dot = 0.0;
        for (int i = 0; i < n; ++i)
          dot += grad[mq * 2 * n + n + i] * feps[static_cast<std::size_t>(i)];
        acc += psic * mesh.cells[c].volume * dot;
      }
    }
    return acc;
  };

  fill(traj.snapshots[0], w0, xival0, xigrad0);
  double lhs = 0.0, rhs = 0.0;
  double rhs_prev = rhs_at(traj.snapshots[0], xigrad0, traj.snapshots[0].time);

  for (std::size_t k = 0; k + 1 < K; ++k) {
    const StateField& s1 = traj.snapshots[k + 1];
    fill(s1, w1, xival1, xigrad1);
    double t0 = traj.snapshots[k].time, t1 = s1.time;
    for (int c = 0; c < nc; ++c) {
      std::size_t q = static_cast<std::size_t>(c);
      if (!needed[q] || mesh.cells[c].side != sigma) continue;
      Vec2 x = mesh.cells[c].center;
      double pm = 0.5 * (psi.value(t0, x) + psi.value(t1, x));
      if (pm == 0.0) continue;
      lhs += mesh.cells[c].volume * pm * (xival1[q] - xival0[q]);
    }
    double rhs_next = rhs_at(s1, xigrad1, t1);
    rhs += 0.5 * (t1 - t0) * (rhs_prev + rhs_next);
    rhs_prev = rhs_next;
    w0.swap(w1);
    xival0.swap(xival1);
    xigrad0.swap(xigrad1);
  }
  return lhs - rhs;
}

SmoothTestFunction coordinate_plateau(int dim, int j, double level) {
  ProjectionTruncation one{level, 1};
  SmoothTestFunction f;
  f.id = "coord" + std::to_string(j) + "_plateau" + std::to_string(level);
  f.dim = dim;
  f.value = [one, j](std::span<const double> u) {
    double s = u[static_cast<std::size_t>(j)];
    return one.value(0, std::span<const double>(&s, 1));
  };
  f.gradient = [one, j, dim](std::span<const double> u, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    double s = u[static_cast<std::size_t>(j)];
    double gs;
    one.gradient(0, std::span<const double>(&s, 1), std::span<double>(&gs, 1));
    g[static_cast<std::size_t>(j)] = gs;
    (void)dim;
  };
  return f;
}

SmoothTestFunction l1_plateau(int dim, double E, double N) {
  RelEntropyTruncation tr{E, N};
  SmoothTestFunction f;
  f.id = "l1_plateau_E" + std::to_string(E) + "_N" + std::to_string(N);
  f.dim = dim;
  f.value = [tr](std::span<const double> u) { return tr.profile_of_l1(u); };
  f.gradient = [tr](std::span<const double> u, std::span<double> g) {
    double d = tr.profile_deriv(sum(u));
    std::fill(g.begin(), g.end(), d);
  };
  return f;
}

SmoothTestFunction constant_fn(int dim, double c) {
  SmoothTestFunction f;
  f.id = "constant" + std::to_string(c);
  f.dim = dim;
  f.value = [c](std::span<const double>) { return c; };
  f.gradient = [](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
  };
  return f;
}

namespace {

SmoothTestFunction projection_fn(int dim, int j, double E) {
  ProjectionTruncation xi{E, dim};
  SmoothTestFunction f;
  f.id = "proj" + std::to_string(j) + "_E" + std::to_string(E);
  f.dim = dim;
  f.value = [xi, j](std::span<const double> u) { return xi.value(j, u); };
  f.gradient = [xi, j](std::span<const double> u, std::span<double> g) { xi.gradient(j, u, g); };
  return f;
}

}  // namespace

ResidualLevelResult run_residual_level(const Scenario& base, int level) {
  Scenario sc = base;
  sc.resolution = base.resolution << level;
  double f = std::pow(4.0, level);
  sc.dt_init = base.dt_init / f;
  sc.output_every = base.output_every / f;

  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  Solver solver(sc, mesh);
  Trajectory traj = solver.run();
  if (traj.aborted)
    throw SolverAbort("run_residual_level: trajectory aborted: " + traj.abort_reason);

  // Test bumps with ramps wide enough to be resolved at the base level; the
  // quadrature of unresolved ramps is pre-asymptotic noise.
  const double T = sc.t_end;
  double px0 = 1e300, px1 = -1e300, py0 = 1e300, py1 = -1e300;
  for (const Vec2& v : sc.geometry.plus.vertices) {
    px0 = std::min(px0, v[0]);
    px1 = std::max(px1, v[0]);
    py0 = std::min(py0, v[1]);
    py1 = std::max(py1, v[1]);
  }
  auto frac = [](double a, double b, double s) { return a + s * (b - a); };
  std::vector<SpaceTimeBump> psis_outer;
  psis_outer.push_back({"outer_full", {-1.0, -0.5, T + 0.5, T + 1.0},
                        {frac(px0, px1, 0.25), frac(px0, px1, 0.5), frac(px0, px1, 0.7),
                         frac(px0, px1, 0.95)},
                        {frac(py0, py1, 0.1), frac(py0, py1, 0.35), frac(py0, py1, 0.65),
                         frac(py0, py1, 0.9)}});
  psis_outer.push_back({"outer_rampin", {0.0, 0.4 * T, T + 0.5, T + 1.0},
                        {frac(px0, px1, 0.3), frac(px0, px1, 0.55), frac(px0, px1, 0.75),
                         frac(px0, px1, 0.95)},
                        {frac(py0, py1, 0.15), frac(py0, py1, 0.4), frac(py0, py1, 0.6),
                         frac(py0, py1, 0.85)}});

  Vec2 anchor = sc.geometry.interface.point(0.5);
  const double len = sc.geometry.interface.length();
  double map_radius = sc.geometry.template_name == "flat_symmetric" ? 8.0 : 0.3 * len;
  ReflectionMap map = reflection_map(sc.geometry, anchor, map_radius);
  if (sc.geometry.interface.axis != 0)
    throw ConfigError("run_residual_level: battery supports vertical interfaces only");
  // Scale the interface bump to fit the map neighbourhood.
  double scale = std::min(1.0, 0.8 * map_radius / (0.62 * len));
  double hx = 0.45 * len * scale, hy = 0.42 * len * scale;
  double c = anchor[1];
  std::vector<SpaceTimeBump> psis_int;
  psis_int.push_back({"int_full", {-1.0, -0.5, T + 0.5, T + 1.0},
                      {-hx, -0.22 * hx, 0.22 * hx, hx},
                      {c - hy, c - 0.33 * hy, c + 0.33 * hy, c + hy}});
  psis_int.push_back({"int_rampin", {0.0, 0.5 * T, T + 0.5, T + 1.0},
                      {-hx, -0.3 * hx, 0.3 * hx, hx},
                      {c - hy, c - 0.4 * hy, c + 0.4 * hy, c + hy}});

  ResidualLevelResult out;
  out.h = mesh.h;
  out.dt = sc.dt_init;
  for (const SmoothTestFunction& zeta : default_zeta_battery(sc.n_species))
    for (const SpaceTimeBump& psi : psis_outer)
      out.outer = std::max(out.outer,
                           std::abs(renorm_residual_outer(traj, mesh, sc, zeta, psi, Side::Plus)));
  for (const SmoothTestFunction& xi : default_xi_battery(sc.n_species))
    for (const SpaceTimeBump& psi : psis_int)
      for (Side s : {Side::Plus, Side::Minus})
        out.interface_ = std::max(
            out.interface_, std::abs(renorm_residual_interface(traj, mesh, sc, xi, map, psi, s)));

  // Consistency with the plain weak form when the truncation never engages.
  SmoothTestFunction id0 = coordinate_plateau(sc.n_species, 0, 1e6);
  double r1 = renorm_residual_outer(traj, mesh, sc, id0, psis_outer.front(), Side::Plus);
  double r2 = weak_residual_outer(traj, mesh, sc, 0, psis_outer.front(), Side::Plus);
  out.weak_consistency = std::abs(r1 - r2);
  return out;
}

std::vector<SmoothTestFunction> default_zeta_battery(int n) {
  std::vector<SmoothTestFunction> out;
  for (int j = 0; j < n; ++j) {
    out.push_back(projection_fn(n, j, 8.0));
    out.push_back(projection_fn(n, j, 32.0));
  }
  out.push_back(l1_plateau(n, 1.5, 2.0));
  out.push_back(l1_plateau(n, 8.0, 2.0));
  out.push_back(constant_fn(n, 1.0));
  return out;
}

std::vector<SmoothTestFunction> default_xi_battery(int n) {
  std::vector<SmoothTestFunction> out;
  for (int j = 0; j < 2 * n; ++j) {
    out.push_back(projection_fn(2 * n, j, 8.0));
    out.push_back(projection_fn(2 * n, j, 32.0));
  }
  // Low levels whose transition band overlaps order-one densities.
  out.push_back(l1_plateau(2 * n, 1.5, 2.0));
  out.push_back(l1_plateau(2 * n, 2.0, 2.0));
  out.push_back(l1_plateau(2 * n, 8.0, 2.0));
  out.push_back(l1_plateau(2 * n, 32.0, 3.0));
  out.push_back(constant_fn(2 * n, 1.0));
  out.push_back(l1_plateau(2 * n, 1e6, 2.0));  // derivative support never attained
  return out;
}

}  // namespace crd
