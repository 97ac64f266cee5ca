// Acceptance suite: one check per shipped guarantee, one pass/fail line each.
// Usage: acceptance [--criterion N]; without arguments all criteria run.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coupledrd/diagnostics.hpp"
#include "coupledrd/residual.hpp"
#include "coupledrd/scenario_io.hpp"
#include "coupledrd/verification.hpp"

using namespace crd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome criterion1_hypothesis_validators() {
  double worst_bulk = 0.0, worst_int = 0.0, worst_mass = 0.0, worst_qp = 0.0;
  for (const ModelCase& mc : builtin_model_battery()) {
    HypothesisReport rep = validate_hypotheses(mc.rates, mc.entropy, 10000, 424242);
    worst_bulk = std::max(worst_bulk, rep.bulk_dissipation_violation);
    worst_int = std::max(worst_int, rep.interface_dissipation_violation);
    worst_mass = std::max(worst_mass, rep.mass_preservation_defect);
    worst_qp = std::max({worst_qp, rep.bulk_quasi_positivity_violation,
                         rep.interface_quasi_positivity_violation});
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "bulk_diss=%.3e interface_diss=%.3e mass=%.3e quasi_pos=%.3e", worst_bulk,
                worst_int, worst_mass, worst_qp);
  bool pass = worst_bulk <= 1e-12 && worst_int <= 1e-12 && worst_mass == 0.0 && worst_qp <= 1e-12;
  return {pass, buf};
}

Outcome criterion2_gradient_consistency() {
  KineticsSuiteResult res = verify_kinetics_suite(10000, 424242);
  char buf[128];
  std::snprintf(buf, sizeof buf, "max relative deviation=%.3e",
                res.max_gradient_consistency_rel);
  return {res.max_gradient_consistency_rel <= 1e-10, buf};
}

Outcome criterion3_reflection_suite() {
  GeometrySuiteResult res = verify_geometry_suite(424242);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "involution=%.3e interface_fixed=%.3e det=%.3e boundary=%.3e partition=%.3e",
                res.max_involution, res.max_interface_fixed, res.max_det_defect,
                res.max_boundary_defect, res.max_partition_defect);
  bool pass = res.max_involution <= 1e-10 && res.max_interface_fixed <= 1e-10 &&
              res.max_det_defect <= 1e-6 && res.max_partition_defect <= 1e-12;
  return {pass, buf};
}

Outcome criterion4_conservation_positivity() {
  Scenario sc = load_scenario("flat_linear");
  sc.resolution = 32;
  sc.t_end = 1.0;
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  Trajectory traj = Solver(sc, mesh).run();
  if (traj.aborted) return {false, "run aborted: " + traj.abort_reason};

  double m0 = traj.ledger.front().mass_plus[0] + traj.ledger.front().mass_minus[0];
  double drift = 0.0;
  double min_density = 0.0;
  for (const LedgerRow& row : traj.ledger)
    drift = std::max(drift, std::abs(row.mass_plus[0] + row.mass_minus[0] - m0));
  for (const StateField& s : traj.snapshots) min_density = std::min(min_density, s.min_value());
  double floored = traj.ledger.back().floored_mass;

  char buf[192];
  std::snprintf(buf, sizeof buf, "mass_drift=%.3e rel, floored=%.3e rel, min_density=%.3e",
                drift / m0, floored / m0, min_density);
  return {drift <= 1e-10 * m0 && floored <= 1e-8 * m0 && min_density >= 0.0, buf};
}

Outcome criterion5_entropy_inequality_refinement() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : builtin_scenario_names()) {
    Scenario base = load_scenario(name);
    base.resolution = 8;
    base.t_end = 0.25;
    base.output_every = 0.05;
    std::vector<double> defects;
    for (int level = 0; level < 3; ++level) {
      Scenario sc = base;
      sc.resolution = base.resolution << level;
      sc.dt_init = base.dt_init / std::pow(4.0, level);
      Mesh mesh = build_mesh(sc.geometry, sc.resolution);
      Trajectory traj = Solver(sc, mesh).run();
      if (traj.aborted) return {false, name + " aborted: " + traj.abort_reason};
      defects.push_back(entropy_inequality_check(traj).max_positive);
    }
    const double floor = 1e-12;
    bool ok = true;
    for (int l = 0; l < 2; ++l)
      ok = ok && (defects[l + 1] <= defects[l] / 1.5 || defects[l + 1] <= floor);
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s[%s %.2e->%.2e->%.2e] ", name.c_str(), ok ? "ok" : "FAIL",
                  defects[0], defects[1], defects[2]);
    detail += buf;
  }
  return {pass, detail};
}

Outcome criterion6_epsilon_consistency() {
  Scenario base = load_scenario("flat_polynomial");
  base.t_end = 0.5;
  Mesh mesh = build_mesh(base.geometry, base.resolution);
  std::vector<Trajectory> runs;
  for (double eps : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
    Scenario sc = base;
    sc.epsilon = eps;
    runs.push_back(Solver(sc, mesh).run());
    if (runs.back().aborted) return {false, "run aborted"};
  }
  std::vector<double> dist;
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
    double d = 0.0;
    for (std::size_t s = 0; s < runs[k].snapshots.size(); ++s)
      d = std::max(d, sup_distance(runs[k].snapshots[s], runs[k + 1].snapshots[s]));
    dist.push_back(d);
  }
  bool pass = true;
  std::string detail = "sup distances:";
  for (std::size_t k = 0; k < dist.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3e", dist[k]);
    detail += buf;
    if (k > 0) pass = pass && dist[k] < dist[k - 1];
  }
  return {pass, detail};
}

Outcome criterion7_truncation_properties() {
  TruncationSuiteResult res = verify_truncation_suite(2000, 424242);
  std::string detail = "decay constants by N:";
  for (double d : res.xi_star_decay) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3f", d);
    detail += buf;
  }
  return {res.pass, detail};
}

Outcome criterion8_coercivity() {
  Scenario sc = load_scenario("flat_linear");
  sc.resolution = 8;
  sc.t_end = 0.1;
  sc.output_every = 0.05;
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  StrongSolutionProfile prof = strong_surrogate(sc, mesh, 2);
  const StateField& U = prof.snapshots.back();

  std::vector<Vec2> anchors;
  std::vector<double> radii;
  default_anchors(sc.geometry, anchors, radii);
  PartitionOfUnity pou = PartitionOfUnity::build(sc.geometry, anchors, radii);
  std::vector<ReflectionMap> maps;
  for (std::size_t b = 0; b < anchors.size(); ++b)
    maps.push_back(reflection_map(sc.geometry, anchors[b], radii[b]));

  double umax = 0.0;
  for (double v : U.values) umax = std::max(umax, v);
  RelEntropyTruncation trunc{std::max(16.0, 8.0 * sc.n_species * umax), 4.0};

  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> pert(-0.3, 0.3);
  std::vector<StateField> battery;
  for (int k = 0; k < 200; ++k) {
    StateField u = U;
    for (int c = 0; c < mesh.n_cells(); ++c) u.at(c, 0) *= 1.0 + pert(rng);
    battery.push_back(std::move(u));
  }
  StateField spike = U;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 x = mesh.cells[c].center;
    if (mesh.cells[c].side == Side::Minus && x[0] > -mesh.h && std::abs(x[1] - 0.5) < 0.2)
      spike.at(c, 0) = 10.0 * trunc.E;
  }
  battery.push_back(std::move(spike));

  CoercivityReport rep = coercivity_check(battery, U, mesh, pou, maps, trunc, sc.entropy);
  RelEntropyState degenerate = relative_entropy(U, U, mesh, pou, maps, trunc, sc.entropy);

  char buf[224];
  std::snprintf(buf, sizeof buf,
                "min_H_rel=%.3e min_ratio_sqrt=%.3f min_ratio_bad=%.3f degenerate=%.3e E=%.0f",
                rep.min_H_rel, rep.min_ratio_sqrt, rep.min_ratio_bad, degenerate.H_rel, trunc.E);
  bool pass = rep.min_H_rel >= 0.0 && rep.min_ratio_sqrt > 0.0 &&
              std::abs(degenerate.H_rel) <= 1e-12;
  return {pass, buf};
}

Outcome criterion9_weak_strong_stability() {
  Scenario sc = load_scenario("flat_linear");
  sc.resolution = 16;
  sc.t_end = 1.0;
  sc.output_every = 0.05;
  Mesh mesh = build_mesh(sc.geometry, sc.resolution);
  std::vector<Vec2> anchors;
  std::vector<double> radii;
  default_anchors(sc.geometry, anchors, radii);
  PartitionOfUnity pou = PartitionOfUnity::build(sc.geometry, anchors, radii);
  std::vector<ReflectionMap> maps;
  for (std::size_t b = 0; b < anchors.size(); ++b)
    maps.push_back(reflection_map(sc.geometry, anchors[b], radii[b]));
  RelEntropyTruncation trunc{32.0, 4.0};

  StabilityResult zero = stability_experiment(sc, mesh, 0.0, pou, maps, trunc);
  double zmax = 0.0;
  for (double h : zero.H_rel) zmax = std::max(zmax, std::abs(h));

  StabilityResult pert = stability_experiment(sc, mesh, 1e-3, pou, maps, trunc);
  bool envelope = true;
  for (std::size_t k = 0; k < pert.t.size(); ++k)
    envelope = envelope &&
               pert.H_rel[k] <= std::exp(pert.fitted_C * pert.t[k]) * pert.H_rel_0 * (1.0 + 1e-9);

  StabilityResult half = stability_experiment(sc, mesh, 0.5e-3, pou, maps, trunc);
  double cfloor = std::max({std::abs(pert.fitted_C), std::abs(half.fitted_C), 0.1});
  bool c_stable = std::abs(pert.fitted_C - half.fitted_C) <= 0.2 * cfloor;

  char buf[224];
  std::snprintf(buf, sizeof buf,
                "zero_pert_max=%.3e fitted_C=%.4f fitted_C_half=%.4f envelope=%s", zmax,
                pert.fitted_C, half.fitted_C, envelope ? "ok" : "violated");
  return {zmax <= 1e-10 && envelope && c_stable, buf};
}

Outcome criterion10_renormalised_residuals() {
  Scenario base = load_scenario("flat_linear");
  base.resolution = 8;
  base.t_end = 0.25;
  base.output_every = 0.025;
  std::vector<ResidualLevelResult> series;
  for (int level = 0; level < 3; ++level) series.push_back(run_residual_level(base, level));

  bool decrease = true;
  double weak = 0.0;
  for (int l = 0; l < 2; ++l) {
    decrease = decrease && series[l + 1].outer <= series[l].outer / 1.5;
    decrease = decrease && series[l + 1].interface_ <= series[l].interface_ / 1.5;
  }
  for (const ResidualLevelResult& r : series) weak = std::max(weak, r.weak_consistency);

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "outer %.2e->%.2e->%.2e interface %.2e->%.2e->%.2e weak_consistency=%.2e",
                series[0].outer, series[1].outer, series[2].outer, series[0].interface_,
                series[1].interface_, series[2].interface_, weak);
  return {decrease && weak <= 1e-12, buf};
}

const struct {
  int id;
  const char* name;
  Outcome (*fn)();
} kCriteria[] = {
    {1, "hypothesis validators", criterion1_hypothesis_validators},
    {2, "gradient-structure consistency", criterion2_gradient_consistency},
    {3, "reflection suite", criterion3_reflection_suite},
    {4, "conservation and positivity", criterion4_conservation_positivity},
    {5, "discrete entropy inequality refinement", criterion5_entropy_inequality_refinement},
    {6, "epsilon-regularization consistency", criterion6_epsilon_consistency},
    {7, "truncation property suite", criterion7_truncation_properties},
    {8, "relative-entropy coercivity", criterion8_coercivity},
    {9, "weak-strong stability", criterion9_weak_strong_stability},
    {10, "renormalised-formulation residuals", criterion10_renormalised_residuals},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }
  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s (%s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
