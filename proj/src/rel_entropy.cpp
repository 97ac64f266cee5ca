#include "coupledrd/rel_entropy.hpp"

#include <algorithm>
#include <cmath>

#include "coupledrd/profiles.hpp"

namespace crd {

double RelEntropyTruncation::profile(double r) const {
  if (r <= E) return 1.0;
  return Cutoff::value(std::log(r / E) / ((N - 1.0) * std::log(E)));
}

double RelEntropyTruncation::profile_deriv(double r) const {
  if (r <= E) return 0.0;
  double denom = (N - 1.0) * std::log(E);
  return Cutoff::d1(std::log(r / E) / denom) / (denom * r);
}

double RelEntropyTruncation::profile_of_l1(std::span<const double> v) const {
  return profile(sum(v));
}

double RelEntropyTruncation::xi_star(std::span<const double> utilde) const {
  return profile_of_l1(utilde);
}

void RelEntropyTruncation::xi_star_grad(std::span<const double> utilde,
                                        std::span<double> out) const {
  double d = profile_deriv(sum(utilde));
  std::fill(out.begin(), out.end(), d);
}

void RelEntropyTruncation::zeta_star_grad(std::span<const double> u, std::span<double> out) const {
  double d = profile_deriv(sum(u));
  std::fill(out.begin(), out.end(), d);
}

const StateField& StrongSolutionProfile::at_time(double t) const {
  for (const StateField& s : snapshots)
    if (std::abs(s.time - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  throw std::invalid_argument("strong solution profile: no snapshot at the requested time");
}

StrongSolutionProfile strong_surrogate(const Scenario& scenario, const Mesh& coarse_mesh,
                                       int refine) {
  StrongSolutionProfile prof;
  Trajectory traj;
  Mesh fine_mesh;
  const Mesh* run_mesh = &coarse_mesh;

  if (refine > 1) {
    Scenario fine = scenario;
    fine.resolution = scenario.resolution * refine;
    fine_mesh = build_mesh(scenario.geometry, fine.resolution);
    run_mesh = &fine_mesh;
    Solver solver(fine, fine_mesh);
    traj = solver.run();
  } else {
    Solver solver(scenario, coarse_mesh);
    traj = solver.run();
  }
  if (traj.aborted) throw SolverAbort("strong_surrogate: reference run aborted: " + traj.abort_reason);

  for (const StateField& s : traj.snapshots) {
    if (refine <= 1) {
      prof.snapshots.push_back(s);
      continue;
    }
    // Restrict by averaging the fine cells inside each coarse cell.
    StateField r(coarse_mesh.n_cells(), scenario.n_species);
    r.time = s.time;
    double hf = run_mesh->h;
    for (int c = 0; c < coarse_mesh.n_cells(); ++c) {
      Vec2 base = coarse_mesh.cells[c].center;
      int count = 0;
      for (int a = 0; a < refine; ++a)
        for (int b = 0; b < refine; ++b) {
          Vec2 p{base[0] - 0.5 * coarse_mesh.h + (a + 0.5) * hf,
                 base[1] - 0.5 * coarse_mesh.h + (b + 0.5) * hf};
          int fc = run_mesh->cell_at(p);
          if (fc < 0) throw std::runtime_error("strong_surrogate: fine mesh does not cover a coarse cell");
          ++count;
          for (int i = 0; i < scenario.n_species; ++i) r.at(c, i) += s.at(fc, i);
        }
      for (int i = 0; i < scenario.n_species; ++i) r.at(c, i) /= count;
    }
    prof.snapshots.push_back(std::move(r));
  }

  prof.iota = std::numeric_limits<double>::infinity();
  for (const StateField& s : prof.snapshots) prof.iota = std::min(prof.iota, s.min_value());
  prof.lipschitz = 0.0;
  for (const StateField& s : prof.snapshots)
    for (const auto& f : coarse_mesh.interior_faces)
      for (int i = 0; i < scenario.n_species; ++i)
        prof.lipschitz =
            std::max(prof.lipschitz, std::abs(s.at(f.c1, i) - s.at(f.c0, i)) / f.dist);
  for (std::size_t k = 1; k < prof.snapshots.size(); ++k) {
    double dt = prof.snapshots[k].time - prof.snapshots[k - 1].time;
    for (std::size_t q = 0; q < prof.snapshots[k].values.size(); ++q)
      prof.lipschitz = std::max(
          prof.lipschitz,
          std::abs(prof.snapshots[k].values[q] - prof.snapshots[k - 1].values[q]) / dt);
  }
  return prof;
}

namespace {

// Bregman difference u log(u/U) - u + U, the shift-invariant relative entropy
// density per species.
double bregman(double u, double U) {
  if (u == 0.0) return U;
  return u * std::log(u / U) - u + U;
}

}  // namespace

RelEntropyState relative_entropy(const StateField& u, const StateField& U, const Mesh& mesh,
                                 const PartitionOfUnity& pou,
                                 const std::vector<ReflectionMap>& maps,
                                 const RelEntropyTruncation& trunc, const EntropyModel& entropy) {
  if (maps.size() != pou.size())
    throw std::invalid_argument("relative_entropy: one reflection map per anchor required");
  const int n = u.n_species;
  const int nc = mesh.n_cells();
  if (U.n_species != n || U.n_cells() != nc)
    throw std::invalid_argument("relative_entropy: state/reference mismatch");
  if (!(U.min_value() > 0.0))
    throw std::invalid_argument("relative_entropy: reference must be strictly positive");

  std::vector<ExtendedField> ext;
  ext.reserve(maps.size());
  for (const ReflectionMap& m : maps) ext.push_back(extend_field(u, m, mesh));

  RelEntropyState out;
  out.chi.assign(static_cast<std::size_t>(nc), 0.0);
  out.cls.assign(static_cast<std::size_t>(nc), RelEntropyClass::Good);

  std::vector<double> stacked(static_cast<std::size_t>(2 * n));
  int n_good = 0, n_pos = 0, n_bad = 0;

  for (int c = 0; c < nc; ++c) {
    Vec2 x = mesh.cells[c].center;
    double chi = pou.phi_out(x) * trunc.zeta_star(u.cell(c));
    for (std::size_t b = 0; b < maps.size(); ++b) {
      double phi = pou.phi(b, x);
      if (phi == 0.0) continue;
      if (!ext[b].valid[static_cast<std::size_t>(c)])
        throw std::runtime_error(
            "relative_entropy: missing reflected coverage for a cell with positive weight");
      for (int i = 0; i < n; ++i) {
        stacked[static_cast<std::size_t>(i)] = u.at(c, i);
        stacked[static_cast<std::size_t>(n + i)] = ext[b].cell(c)[static_cast<std::size_t>(i)];
      }
      chi += phi * trunc.xi_star(stacked);
    }
    out.chi[static_cast<std::size_t>(c)] = chi;

    double l1 = 0.0;
    for (int i = 0; i < n; ++i) l1 += u.at(c, i);

    RelEntropyClass cls;
    if (chi >= 1.0 - 1e-12) {
      cls = RelEntropyClass::Good;
      ++n_good;
    } else if (l1 >= 0.5 * trunc.E) {
      cls = RelEntropyClass::Positive;
      ++n_pos;
    } else {
      cls = RelEntropyClass::Bad;
      ++n_bad;
      out.measure_bad += mesh.cells[c].volume;
    }
    out.cls[static_cast<std::size_t>(c)] = cls;

    // h_rel = sum_i [ bregman(u_i, U_i) ] + (1 - chi) sum_i u_i log U_i,
    // with reference densities scaling both entries.
    double cell_val = 0.0;
    double sqdist = 0.0;
    Side side = mesh.cells[c].side;
    for (int i = 0; i < n; ++i) {
      double ref = entropy.ref(side, i);
      double ui = u.at(c, i) / ref;
      double Ui = U.at(c, i) / ref;
      cell_val += ref * (bregman(ui, Ui) + (1.0 - chi) * ui * std::log(Ui));
      double ds = std::sqrt(u.at(c, i)) - std::sqrt(U.at(c, i));
      sqdist += ds * ds;
    }
    out.H_rel += mesh.cells[c].volume * cell_val;
    out.sqrt_distance += mesh.cells[c].volume * sqdist;
  }

  out.frac_good = static_cast<double>(n_good) / nc;
  out.frac_positive = static_cast<double>(n_pos) / nc;
  out.frac_bad = static_cast<double>(n_bad) / nc;
  return out;
}

double d_rel_integral(const StateField& u, const StateField& U, const Mesh& mesh) {
  double acc = 0.0;
  const int n = u.n_species;
  for (const auto& f : mesh.interior_faces) {
    for (int i = 0; i < n; ++i) {
      double su0 = std::sqrt(u.at(f.c0, i)), su1 = std::sqrt(u.at(f.c1, i));
      double sU0 = std::sqrt(U.at(f.c0, i)), sU1 = std::sqrt(U.at(f.c1, i));
      double ratio = 0.5 * (su0 / sU0 + su1 / sU1);
      double diff = (su1 - su0) - ratio * (sU1 - sU0);
      acc += (f.area / f.dist) * diff * diff;
    }
  }
  return acc;
}

double e_rel_interface(const StateField& u, const StateField& U, const Mesh& mesh, Side side) {
  double acc = 0.0;
  const int n = u.n_species;
  for (const auto& f : mesh.interface_faces) {
    int c = side == Side::Plus ? f.cell_plus : f.cell_minus;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = std::sqrt(u.at(c, i)) - std::sqrt(U.at(c, i));
      s += d * d;
    }
    acc += f.area * s;
  }
  return acc;
}

CoercivityReport coercivity_check(const std::vector<StateField>& states, const StateField& U,
                                  const Mesh& mesh, const PartitionOfUnity& pou,
                                  const std::vector<ReflectionMap>& maps,
                                  const RelEntropyTruncation& trunc, const EntropyModel& entropy) {
  CoercivityReport rep;
  rep.n_states = static_cast<int>(states.size());

  // Admissible truncation level estimate from the reference bounds; loose by
  // design, reported alongside the empirical constants.
  double maxU = 0.0;
  for (double v : U.values) maxU = std::max(maxU, v);
  double n = U.n_species;
  double c0 = std::log(2.0 * n) + 1.0 + std::max(0.0, std::log(std::max(maxU, 1e-300)));
  rep.threshold_E = std::max({2.0, 4.0 * n * maxU, std::exp(c0 + 1.0)});
  rep.threshold_ok = trunc.E >= rep.threshold_E;

  rep.min_ratio_sqrt = std::numeric_limits<double>::infinity();
  rep.min_ratio_bad = std::numeric_limits<double>::infinity();
  rep.min_H_rel = std::numeric_limits<double>::infinity();
  bool any_sqrt = false, any_bad = false;

  for (const StateField& u : states) {
    RelEntropyState rel = relative_entropy(u, U, mesh, pou, maps, trunc, entropy);
    rep.min_H_rel = std::min(rep.min_H_rel, rel.H_rel);
    if (rel.sqrt_distance > 1e-14) {
      rep.min_ratio_sqrt = std::min(rep.min_ratio_sqrt, rel.H_rel / rel.sqrt_distance);
      any_sqrt = true;
    }
    if (rel.measure_bad > 0.0) {
      double denom = trunc.E * std::log(trunc.E) * rel.measure_bad;
      rep.min_ratio_bad = std::min(rep.min_ratio_bad, rel.H_rel / denom);
      any_bad = true;
    }
  }
  if (!any_sqrt) rep.min_ratio_sqrt = 0.0;
  if (!any_bad) rep.min_ratio_bad = 0.0;
  return rep;
}

double perturbation_pattern(Vec2 x) {
  return std::sin(3.0 * x[0] + 1.0) * std::cos(2.0 * x[1] + 0.5);
}

StabilityResult stability_experiment(const Scenario& scenario, const Mesh& mesh,
                                     double perturbation_amplitude, const PartitionOfUnity& pou,
                                     const std::vector<ReflectionMap>& maps,
                                     const RelEntropyTruncation& trunc, double iota_floor) {
  Solver ref_solver(scenario, mesh);
  Trajectory ref = ref_solver.run();
  if (ref.aborted) throw SolverAbort("stability_experiment: reference run aborted: " + ref.abort_reason);
  for (const StateField& s : ref.snapshots)
    if (s.min_value() < iota_floor)
      throw SolverAbort("stability_experiment: reference run loses positivity; "
                        "the strong-solution hypothesis fails");

  Scenario pert = scenario;
  InitialFn base = scenario.initial;
  double amp = perturbation_amplitude;
  pert.initial = [base, amp](Side s, Vec2 x, std::span<double> out) {
    base(s, x, out);
    double factor = 1.0 + amp * perturbation_pattern(x);
    for (double& v : out) v = std::max(0.0, v * factor);
  };
  Solver pert_solver(pert, mesh);
  Trajectory run = pert_solver.run();
  if (run.aborted) throw SolverAbort("stability_experiment: perturbed run aborted: " + run.abort_reason);

  StabilityResult res;
  for (std::size_t k = 0; k < run.snapshots.size() && k < ref.snapshots.size(); ++k) {
    const StateField& u = run.snapshots[k];
    const StateField& U = ref.snapshots[k];
    RelEntropyState rel = relative_entropy(u, U, mesh, pou, maps, trunc, scenario.entropy);
    res.t.push_back(u.time);
    res.H_rel.push_back(rel.H_rel);
    res.frac_good.push_back(rel.frac_good);
    res.frac_positive.push_back(rel.frac_positive);
    res.frac_bad.push_back(rel.frac_bad);
  }
  res.H_rel_0 = res.H_rel.front();
  res.H_rel_T = res.H_rel.back();

  // Smallest C with H_rel(t) <= exp(C t) H_rel(0) across the snapshots.
  double C = -std::numeric_limits<double>::infinity();
  if (res.H_rel_0 > 0.0) {
    for (std::size_t k = 1; k < res.t.size(); ++k) {
      if (res.t[k] <= 0.0) continue;
      double ratio = std::max(res.H_rel[k], 1e-300) / res.H_rel_0;
      C = std::max(C, std::log(ratio) / res.t[k]);
    }
  } else {
    C = 0.0;
  }
  res.fitted_C = C;
  return res;
}

}  // namespace crd
