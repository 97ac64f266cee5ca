#include "coupledrd/solver.hpp"

#include <algorithm>
#include <cmath>

#include "coupledrd/diagnostics.hpp"

namespace crd {

void Scenario::validate() const {
  if (n_species < 1) throw ConfigError("scenario: n_species must be positive");
  if (resolution < 2) throw ConfigError("scenario: resolution must be at least 2");
  if (diffusion.coeff.size() != static_cast<std::size_t>(n_species))
    throw ConfigError("scenario: diffusion spec does not cover all species");
  if (!(diffusion.ellipticity() > 0.0))
    throw ConfigError("scenario: diffusion tensors must be uniformly elliptic");
  if (epsilon < 0.0 || epsilon > 1.0) throw ConfigError("scenario: epsilon must lie in [0,1]");
  if (!(dt_init > 0.0) || !(dt_min > 0.0) || dt_min > dt_init)
    throw ConfigError("scenario: need 0 < dt_min <= dt_init");
  if (!(t_end > 0.0)) throw ConfigError("scenario: t_end must be positive");
  if (!(output_every > 0.0)) throw ConfigError("scenario: output_every must be positive");
  if (!initial) throw ConfigError("scenario: missing initial data");
  if (entropy.n != n_species) throw ConfigError("scenario: entropy model species count mismatch");
}

DiffusionOperator::DiffusionOperator(const Mesh& mesh, const DiffusionSpec& diffusion,
                                     int species) {
  n_ = mesh.n_cells();
  inv_vol_.resize(static_cast<std::size_t>(n_));
  for (int c = 0; c < n_; ++c) inv_vol_[static_cast<std::size_t>(c)] = 1.0 / mesh.cells[c].volume;
  faces_.reserve(mesh.interior_faces.size());
  for (const auto& f : mesh.interior_faces) {
    Side s = mesh.cells[f.c0].side;
    double a0 = diffusion.value(species, s, f.axis);
    double a1 = diffusion.value(species, mesh.cells[f.c1].side, f.axis);
    double af = 2.0 * a0 * a1 / (a0 + a1);  // harmonic mean of the normal diffusivity
    faces_.push_back({f.c0, f.c1, f.area * af / f.dist});
  }
}

void DiffusionOperator::apply(std::span<const double> u, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const FaceCoeff& f : faces_) {
    double flux = f.trans * (u[static_cast<std::size_t>(f.c1)] - u[static_cast<std::size_t>(f.c0)]);
    out[static_cast<std::size_t>(f.c0)] += flux;
    out[static_cast<std::size_t>(f.c1)] -= flux;
  }
  for (int c = 0; c < n_; ++c) out[static_cast<std::size_t>(c)] *= inv_vol_[static_cast<std::size_t>(c)];
}

void DiffusionOperator::apply_backward_euler(std::span<const double> u, double dt,
                                             std::span<double> out) const {
  apply(u, out);
  for (int c = 0; c < n_; ++c) {
    std::size_t q = static_cast<std::size_t>(c);
    out[q] = u[q] - dt * out[q];
  }
}

int conjugate_gradient(const DiffusionOperator& op, double dt, std::span<const double> rhs,
                       std::span<double> x, double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), p(n), ap(n);
  double bnorm = 0.0;
  for (double v : rhs) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }

  op.apply_backward_euler(x, dt, ap);
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - ap[i];
    p[i] = r[i];
    rr += r[i] * r[i];
  }

  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= rel_tol * bnorm) return it;
    op.apply_backward_euler(p, dt, ap);
    double pap = 0.0;
    for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (pap <= 0.0) throw SolverAbort("conjugate_gradient: operator lost positive definiteness");
    double alpha = rr / pap;
    double rr_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rr_new += r[i] * r[i];
    }
    double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  if (std::sqrt(rr) <= rel_tol * bnorm) return max_iter;
  throw SolverAbort("conjugate_gradient: no convergence, relative residual " +
                    std::to_string(std::sqrt(rr) / bnorm));
}

const StateField& Trajectory::at_time(double t) const {
  for (const StateField& s : snapshots)
    if (std::abs(s.time - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  throw std::invalid_argument("trajectory: no snapshot at the requested time");
}

Solver::Solver(const Scenario& scenario, const Mesh& mesh)
    : scenario_(&scenario), mesh_(&mesh) {
  scenario.validate();
  for (int i = 0; i < scenario.n_species; ++i) ops_.emplace_back(mesh, scenario.diffusion, i);
  model_ = scenario.regularized();
  StateField u0 = initial_state();
  double umax = 0.0;
  for (double v : u0.values) umax = std::max(umax, v);
  density_scale_ = umax > 0.0 ? 1e-3 * umax : 1.0;
}

StateField Solver::initial_state() const {
  StateField u(mesh_->n_cells(), scenario_->n_species);
  for (int c = 0; c < mesh_->n_cells(); ++c)
    scenario_->initial(mesh_->cells[c].side, mesh_->cells[c].center, u.cell(c));
  for (double v : u.values)
    if (v < 0.0 || !std::isfinite(v)) throw ConfigError("scenario: initial data must be finite and non-negative");
  u.time = 0.0;
  return u;
}

std::vector<double> Solver::interface_trace(const StateField& state, Side side) const {
  const int n = scenario_->n_species;
  std::vector<double> tr(mesh_->interface_faces.size() * static_cast<std::size_t>(n));
  for (std::size_t f = 0; f < mesh_->interface_faces.size(); ++f) {
    int c = side == Side::Plus ? mesh_->interface_faces[f].cell_plus
                               : mesh_->interface_faces[f].cell_minus;
    for (int i = 0; i < n; ++i) tr[f * static_cast<std::size_t>(n) + i] = state.at(c, i);
  }
  return tr;
}

void Solver::explicit_source(const StateField& state, std::vector<double>& src) const {
  const int n = scenario_->n_species;
  const int nc = mesh_->n_cells();
  src.assign(static_cast<std::size_t>(nc) * n, 0.0);

  std::vector<double> f(static_cast<std::size_t>(n));
  for (int c = 0; c < nc; ++c) {
    model_.f_eps(mesh_->cells[c].side, state.cell(c), f);
    for (int i = 0; i < n; ++i) src[static_cast<std::size_t>(c) * n + i] = f[static_cast<std::size_t>(i)];
  }

  std::vector<double> r(static_cast<std::size_t>(n));
  for (const auto& face : mesh_->interface_faces) {
    model_.r_eps(state.cell(face.cell_plus), state.cell(face.cell_minus), r);
    double wp = face.area / mesh_->cells[face.cell_plus].volume;
    double wm = face.area / mesh_->cells[face.cell_minus].volume;
    for (int i = 0; i < n; ++i) {
      std::size_t q = static_cast<std::size_t>(i);
      // Outward normal flux r^sigma drains the sigma cell; r^- = -r^+.
      src[static_cast<std::size_t>(face.cell_plus) * n + i] -= wp * r[q];
      src[static_cast<std::size_t>(face.cell_minus) * n + i] += wm * r[q];
    }
  }
}

StateField Solver::step(const StateField& state, double dt, StepStats* stats) const {
  if (!(dt > 0.0)) throw std::domain_error("step: dt must be positive");
  const int n = scenario_->n_species;
  const int nc = mesh_->n_cells();

  std::vector<double> src;
  explicit_source(state, src);

  double mrc = 0.0;
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < n; ++i) {
      double u = state.at(c, i);
      double change = dt * std::abs(src[static_cast<std::size_t>(c) * n + i]);
      mrc = std::max(mrc, change / std::max(u, density_scale_));
    }

  StateField out(nc, n);
  out.time = state.time + dt;
  std::vector<double> b(static_cast<std::size_t>(nc)), w(static_cast<std::size_t>(nc));
  std::vector<double> lw(static_cast<std::size_t>(nc));
  int cg_total = 0;
  double floored = 0.0;

  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < nc; ++c)
      b[static_cast<std::size_t>(c)] = state.at(c, i) + dt * src[static_cast<std::size_t>(c) * n + i];
    w = b;  // warm start
    cg_total += conjugate_gradient(ops_[static_cast<std::size_t>(i)], dt, b, w,
                                   scenario_->cg_tol, 10000);
    // Flux-form update: exact mass balance regardless of the solve tolerance.
    ops_[static_cast<std::size_t>(i)].apply(w, lw);
    for (int c = 0; c < nc; ++c) {
      std::size_t q = static_cast<std::size_t>(c);
      double v = b[q] + dt * lw[q];
      if (v < 0.0) {
        floored += mesh_->cells[c].volume * (-v);
        v = 0.0;
      }
      out.at(c, i) = v;
    }
  }
  if (!out.finite()) throw SolverAbort("step: non-finite state produced");
  if (stats) {
    stats->floored_mass = floored;
    stats->max_relative_change = mrc;
    stats->cg_iterations = cg_total;
  }
  return out;
}

Trajectory Solver::run() const {
  const Scenario& sc = *scenario_;
  Trajectory traj;
  StateField u = initial_state();
  double cum_floor = 0.0;

  auto ledger_row = [&](const StateField& s, double dt_used) {
    LedgerRow row;
    row.t = s.time;
    row.dt = dt_used;
    row.mass_plus.resize(static_cast<std::size_t>(sc.n_species));
    row.mass_minus.resize(static_cast<std::size_t>(sc.n_species));
    for (int i = 0; i < sc.n_species; ++i) {
      row.mass_plus[static_cast<std::size_t>(i)] = species_mass(s, *mesh_, Side::Plus, i);
      row.mass_minus[static_cast<std::size_t>(i)] = species_mass(s, *mesh_, Side::Minus, i);
    }
    row.entropy = total_entropy(s, *mesh_, sc.entropy);
    DissipationBreakdown d = dissipation(s, *mesh_, sc);
    row.dissipation_bulk = d.bulk();
    row.dissipation_interface = d.interface_;
    row.floored_mass = cum_floor;
    traj.ledger.push_back(std::move(row));
  };

  traj.snapshots.push_back(u);
  ledger_row(u, 0.0);

  double t = 0.0;
  double dt = sc.dt_init;
  int clean = 0;
  int snap = 1;

  while (t < sc.t_end - 1e-12 * sc.t_end) {
    double t_target = std::min(snap * sc.output_every, sc.t_end);
    double dt_try = std::min(dt, t_target - t);

    StepStats st;
    StateField next = step(u, dt_try, &st);
    if (st.max_relative_change > 0.2 && dt_try > sc.dt_min) {
      dt = 0.5 * dt_try;
      clean = 0;
      if (dt < sc.dt_min) {
        traj.aborted = true;
        traj.abort_reason = "time step underflow: explicit-change cap drives dt below dt_min";
        return traj;
      }
      continue;
    }
    if (st.max_relative_change > 0.2) {
      traj.aborted = true;
      traj.abort_reason = "time step underflow: explicit change exceeds cap at dt_min";
      return traj;
    }

    u = std::move(next);
    t = u.time;
    cum_floor += st.floored_mass;
    ledger_row(u, dt_try);

    if (++clean >= 10) {
      dt = std::min(dt * 1.2, sc.output_every);
      clean = 0;
    }
    if (t >= t_target - 1e-12) {
      u.time = t_target;  // cancel roundoff drift at snapshot times
      traj.snapshots.push_back(u);
      if (t_target >= snap * sc.output_every - 1e-12) ++snap;
      t = t_target;
    }
  }
  return traj;
}

}  // namespace crd
