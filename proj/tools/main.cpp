#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "coupledrd/csv.hpp"
#include "coupledrd/diagnostics.hpp"
#include "coupledrd/residual.hpp"
#include "coupledrd/scenario_io.hpp"
#include "coupledrd/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;
constexpr int kExitVerify = 3;

struct CommonOpts {
  std::string scenario;
  std::string out = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_scenario = true) {
  if (with_scenario)
    cmd->add_option("--scenario", opts.scenario, "scenario file path or built-in name")
        ->required();
  cmd->add_option("--out", opts.out, "output directory");
  cmd->add_option("--set", opts.overrides, "override scenario keys, e.g. solver.epsilon=0.25");
  cmd->add_option("--seed", opts.seed, "RNG seed for sampling and perturbations");
}

crd::Scenario load(const CommonOpts& opts, json* raw_out = nullptr) {
  json j = crd::load_scenario_json(opts.scenario);
  for (const std::string& ov : opts.overrides) crd::apply_override(j, ov);
  if (raw_out) *raw_out = j;
  crd::Scenario sc = crd::scenario_from_json(j);
  sc.seed = opts.seed;
  return sc;
}

void write_meta(const CommonOpts& opts, const std::string& command, const json& extra = {}) {
  json meta{{"command", command},
            {"scenario", opts.scenario},
            {"seed", opts.seed},
            {"overrides", opts.overrides},
            {"timestamp", crd::iso8601_now()}};
  if (!extra.is_null()) meta["result"] = extra;
  std::ofstream(fs::path(opts.out) / "run_meta.json") << meta.dump(2) << "\n";
}

void write_ledger_csv(const crd::Trajectory& traj, int n_species, const std::string& path) {
  std::vector<std::string> header{"t", "dt"};
  for (int i = 1; i <= n_species; ++i) header.push_back("mass_" + std::to_string(i) + "_plus");
  for (int i = 1; i <= n_species; ++i) header.push_back("mass_" + std::to_string(i) + "_minus");
  header.insert(header.end(), {"H", "D_bulk", "D_int", "floored_mass"});
  crd::CsvWriter csv(path, header);
  std::vector<double> row;
  for (const crd::LedgerRow& r : traj.ledger) {
    row = {r.t, r.dt};
    row.insert(row.end(), r.mass_plus.begin(), r.mass_plus.end());
    row.insert(row.end(), r.mass_minus.begin(), r.mass_minus.end());
    row.insert(row.end(), {r.entropy, r.dissipation_bulk, r.dissipation_interface, r.floored_mass});
    csv.row(row);
  }
}

void write_entropy_report(const crd::Trajectory& traj, const crd::Mesh& mesh,
                          const crd::Scenario& sc, const std::string& path) {
  crd::DefectSeries defects = crd::entropy_inequality_check(traj);
  crd::CsvWriter csv(path, {"t", "H", "D_bulk_plus", "D_bulk_minus", "D_int", "defect"});
  for (const crd::StateField& s : traj.snapshots) {
    crd::DissipationBreakdown d = crd::dissipation(s, mesh, sc);
    double defect = 0.0;
    for (std::size_t k = 0; k < defects.t.size(); ++k)
      if (std::abs(defects.t[k] - s.time) <= 1e-12 * std::max(1.0, s.time))
        defect = defects.defect[k];
    csv.row({s.time, crd::total_entropy(s, mesh, sc.entropy), d.bulk_plus, d.bulk_minus,
             d.interface_, defect});
  }
}

void write_snapshots(const crd::Trajectory& traj, const std::string& dir, int n_species) {
  fs::create_directories(dir);
  std::vector<std::string> header{"cell_id"};
  for (int i = 1; i <= n_species; ++i) header.push_back("u_" + std::to_string(i));
  int idx = 0;
  for (const crd::StateField& s : traj.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%04d.csv", idx++);
    crd::CsvWriter csv((fs::path(dir) / name).string(), header);
    std::vector<double> row(static_cast<std::size_t>(n_species) + 1);
    for (int c = 0; c < s.n_cells(); ++c) {
      row[0] = c;
      for (int i = 0; i < n_species; ++i) row[static_cast<std::size_t>(i) + 1] = s.at(c, i);
      csv.row(row);
    }
  }
}

int cmd_simulate(const CommonOpts& opts) {
  crd::Scenario sc = load(opts);
  crd::Mesh mesh = crd::build_mesh(sc.geometry, sc.resolution);
  crd::Solver solver(sc, mesh);
  crd::Trajectory traj = solver.run();

  fs::create_directories(opts.out);
  {
    std::ofstream os(fs::path(opts.out) / "mesh.csv");
    crd::write_mesh_csv(mesh, os);
  }
  write_ledger_csv(traj, sc.n_species, (fs::path(opts.out) / "ledger.csv").string());
  write_entropy_report(traj, mesh, sc, (fs::path(opts.out) / "entropy_report.csv").string());
  write_snapshots(traj, (fs::path(opts.out) / "snapshots").string(), sc.n_species);
  write_meta(opts, "simulate",
             json{{"aborted", traj.aborted},
                  {"abort_reason", traj.abort_reason},
                  {"steps", traj.ledger.size() - 1},
                  {"snapshots", traj.snapshots.size()}});
  if (traj.aborted) {
    std::cerr << "simulate: aborted: " << traj.abort_reason << "\n";
    return kExitAbort;
  }
  std::cout << "simulate: " << traj.ledger.size() - 1 << " steps, " << traj.snapshots.size()
            << " snapshots -> " << opts.out << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOpts& opts, const std::string& which) {
  fs::create_directories(opts.out);
  json report;
  bool pass = true;

  if (which == "geometry" || which == "all") {
    crd::GeometrySuiteResult g = crd::verify_geometry_suite(opts.seed);
    report["geometry"] = {{"pass", g.pass},
                          {"max_involution", g.max_involution},
                          {"max_interface_fixed", g.max_interface_fixed},
                          {"max_det_defect", g.max_det_defect},
                          {"max_boundary_defect", g.max_boundary_defect},
                          {"max_partition_defect", g.max_partition_defect},
                          {"cases", g.details}};
    pass = pass && g.pass;
  }
  if (which == "kinetics" || which == "all") {
    crd::KineticsSuiteResult k = crd::verify_kinetics_suite(10000, opts.seed);
    report["kinetics"] = {{"pass", k.pass},
                          {"max_bulk_dissipation", k.max_bulk_dissipation},
                          {"max_interface_dissipation", k.max_interface_dissipation},
                          {"max_mass_defect", k.max_mass_defect},
                          {"max_quasi_positivity", k.max_quasi_positivity},
                          {"max_gradient_consistency_rel", k.max_gradient_consistency_rel},
                          {"cases", k.details}};
    pass = pass && k.pass;
  }
  if (which == "truncations" || which == "all") {
    crd::TruncationSuiteResult t = crd::verify_truncation_suite(2000, opts.seed);
    report["truncations"] = {{"pass", t.pass}, {"cases", t.details}};
    pass = pass && t.pass;
  }
  if (which == "residual" || which == "all") {
    crd::Scenario base = crd::load_scenario("flat_linear");
    base.resolution = 8;
    base.t_end = 0.1;
    base.output_every = 0.025;
    crd::ResidualLevelResult r0 = crd::run_residual_level(base, 0);
    crd::ResidualLevelResult r1 = crd::run_residual_level(base, 1);
    bool ok = r1.outer < r0.outer && r1.interface_ < r0.interface_ &&
              std::max(r0.weak_consistency, r1.weak_consistency) <= 1e-12;
    report["residual"] = {{"pass", ok},
                          {"outer", {r0.outer, r1.outer}},
                          {"interface", {r0.interface_, r1.interface_}},
                          {"weak_consistency", std::max(r0.weak_consistency, r1.weak_consistency)}};
    pass = pass && ok;
  }

  report["pass"] = pass;
  std::ofstream(fs::path(opts.out) / ("verify_" + which + ".json")) << report.dump(2) << "\n";
  write_meta(opts, "verify-" + which, json{{"pass", pass}});
  std::cout << "verify-" << which << ": " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitVerify;
}

int cmd_verify_all(const CommonOpts& opts, const std::string& suites_csv) {
  std::vector<std::string> suites;
  std::size_t pos = 0;
  while (pos <= suites_csv.size()) {
    std::size_t comma = suites_csv.find(',', pos);
    std::string s = suites_csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
    if (!s.empty()) suites.push_back(s);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (suites.empty()) {
    std::cerr << "verify-all: nothing to verify (empty suite list)\n";
    return kExitConfig;
  }
  bool pass = true;
  for (const std::string& s : suites) {
    if (s != "geometry" && s != "kinetics" && s != "truncations" && s != "residual")
      throw crd::ConfigError("verify-all: unknown suite '" + s + "'");
    CommonOpts sub = opts;
    int rc = cmd_verify(sub, s);
    pass = pass && rc == kExitOk;
  }
  return pass ? kExitOk : kExitVerify;
}

int cmd_entropy_report(const CommonOpts& opts) {
  crd::Scenario sc = load(opts);
  crd::Mesh mesh = crd::build_mesh(sc.geometry, sc.resolution);
  crd::Solver solver(sc, mesh);
  crd::Trajectory traj = solver.run();
  fs::create_directories(opts.out);
  write_ledger_csv(traj, sc.n_species, (fs::path(opts.out) / "ledger.csv").string());
  write_entropy_report(traj, mesh, sc, (fs::path(opts.out) / "entropy_report.csv").string());
  crd::DefectSeries d = crd::entropy_inequality_check(traj);
  write_meta(opts, "entropy-report",
             json{{"aborted", traj.aborted}, {"max_positive_defect", d.max_positive}});
  if (traj.aborted) return kExitAbort;
  std::cout << "entropy-report: max positive defect " << d.max_positive << "\n";
  return kExitOk;
}

int cmd_stability(const CommonOpts& opts, double perturbation, double E_opt, double N_opt) {
  crd::Scenario sc = load(opts);
  crd::Mesh mesh = crd::build_mesh(sc.geometry, sc.resolution);

  std::vector<crd::Vec2> anchors;
  std::vector<double> radii;
  crd::default_anchors(sc.geometry, anchors, radii);
  crd::PartitionOfUnity pou = crd::PartitionOfUnity::build(sc.geometry, anchors, radii);
  std::vector<crd::ReflectionMap> maps;
  for (std::size_t b = 0; b < anchors.size(); ++b)
    maps.push_back(crd::reflection_map(sc.geometry, anchors[b], radii[b]));

  crd::RelEntropyTruncation trunc;
  // Default truncation level from the reference magnitude.
  crd::Solver probe(sc, mesh);
  double umax = 0.0;
  for (double v : probe.initial_state().values) umax = std::max(umax, v);
  trunc.E = E_opt > 0 ? E_opt : std::max(16.0, 8.0 * sc.n_species * umax);
  trunc.N = N_opt > 0 ? N_opt : 4.0;

  crd::StabilityResult res =
      crd::stability_experiment(sc, mesh, perturbation, pou, maps, trunc);

  fs::create_directories(opts.out);
  {
    crd::CsvWriter csv((fs::path(opts.out) / "stability.csv").string(),
                       {"t", "H_rel", "frac_Sg", "frac_Sp", "frac_Sb", "fitted_C"});
    for (std::size_t k = 0; k < res.t.size(); ++k)
      csv.row({res.t[k], res.H_rel[k], res.frac_good[k], res.frac_positive[k], res.frac_bad[k],
               res.fitted_C});
  }
  json summary{{"H_rel_0", res.H_rel_0},
               {"H_rel_T", res.H_rel_T},
               {"fitted_C", res.fitted_C},
               {"E", trunc.E},
               {"N", trunc.N}};
  std::ofstream(fs::path(opts.out) / "stability.json") << summary.dump(2) << "\n";
  write_meta(opts, "stability", summary);
  std::cout << "stability: H_rel_0=" << res.H_rel_0 << " H_rel_T=" << res.H_rel_T
            << " fitted_C=" << res.fitted_C << "\n";
  return kExitOk;
}

int cmd_renorm_residual(const CommonOpts& opts, int levels) {
  crd::Scenario sc = load(opts);
  fs::create_directories(opts.out);

  std::vector<crd::ResidualLevelResult> series;
  for (int l = 0; l < levels; ++l) series.push_back(crd::run_residual_level(sc, l));

  json jseries = json::array();
  for (const crd::ResidualLevelResult& r : series)
    jseries.push_back({{"h", r.h},
                       {"dt", r.dt},
                       {"residual", std::max(r.outer, r.interface_)},
                       {"residual_outer", r.outer},
                       {"residual_interface", r.interface_},
                       {"weak_consistency", r.weak_consistency}});
  double order_outer = 0.0, order_int = 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    order_outer += std::log2(series[k - 1].outer / series[k].outer);
    order_int += std::log2(series[k - 1].interface_ / series[k].interface_);
  }
  if (series.size() > 1) {
    order_outer /= static_cast<double>(series.size() - 1);
    order_int /= static_cast<double>(series.size() - 1);
  }
  json report{{"test_id", sc.name},
              {"anchor", {sc.geometry.interface.point(0.5)[0], sc.geometry.interface.point(0.5)[1]}},
              {"E", 8.0},
              {"residual",
               series.empty() ? 0.0 : std::max(series.front().outer, series.front().interface_)},
              {"refinement_series", jseries},
              {"fitted_order", std::min(order_outer, order_int)},
              {"fitted_order_outer", order_outer},
              {"fitted_order_interface", order_int}};
  std::ofstream(fs::path(opts.out) / "residual_report.json") << report.dump(2) << "\n";
  write_meta(opts, "renorm-residual", report);
  std::cout << "renorm-residual: orders outer=" << order_outer << " interface=" << order_int
            << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& axis, std::vector<double> values) {
  crd::Scenario base = load(opts);
  fs::create_directories(opts.out);

  if (axis == "epsilon") {
    if (values.empty()) values = {1.0, 0.5, 0.25, 0.125, 0.0625};
    std::vector<std::future<crd::Trajectory>> futs;
    for (double eps : values)
      futs.push_back(std::async(std::launch::async, [base, eps]() {
        crd::Scenario sc = base;
        sc.epsilon = eps;
        crd::Mesh mesh = crd::build_mesh(sc.geometry, sc.resolution);
        return crd::Solver(sc, mesh).run();
      }));
    std::vector<crd::Trajectory> runs;
    for (auto& f : futs) runs.push_back(f.get());
    crd::CsvWriter csv((fs::path(opts.out) / "sweep_epsilon.csv").string(),
                       {"epsilon", "sup_distance_to_next"});
    for (std::size_t k = 0; k + 1 < runs.size(); ++k) {
      double d = 0.0;
      for (std::size_t s = 0; s < runs[k].snapshots.size(); ++s)
        d = std::max(d, crd::sup_distance(runs[k].snapshots[s], runs[k + 1].snapshots[s]));
      csv.row({values[k], d});
    }
  } else if (axis == "resolution" || axis == "dt") {
    if (values.empty()) values = {0.0, 1.0, 2.0};  // refinement levels
    crd::CsvWriter csv((fs::path(opts.out) / ("sweep_" + axis + ".csv")).string(),
                       {"level", axis == "resolution" ? "residual_outer" : "max_positive_defect"});
    for (double lv : values) {
      int level = static_cast<int>(lv);
      if (axis == "resolution") {
        crd::ResidualLevelResult r = crd::run_residual_level(base, level);
        csv.row({lv, r.outer});
      } else {
        crd::Scenario sc = base;
        sc.dt_init = base.dt_init / std::pow(4.0, level);
        sc.resolution = base.resolution << level;
        crd::Mesh mesh = crd::build_mesh(sc.geometry, sc.resolution);
        crd::Trajectory traj = crd::Solver(sc, mesh).run();
        csv.row({lv, crd::entropy_inequality_check(traj).max_positive});
      }
    }
  } else if (axis == "E") {
    if (values.empty()) values = {4.0, 16.0, 64.0};
    crd::CsvWriter csv((fs::path(opts.out) / "sweep_E.csv").string(),
                       {"E", "sup_gradient", "sup_scaled_hessian"});
    crd::VPropertyReport rep = crd::verify_V_properties(2 * base.n_species, values, 2000, opts.seed);
    for (std::size_t k = 0; k < values.size(); ++k)
      csv.row({values[k], rep.sup_gradient[k], rep.sup_scaled_hessian[k]});
  } else if (axis == "N") {
    if (values.empty()) values = {2.0, 4.0, 8.0};
    crd::CsvWriter csv((fs::path(opts.out) / "sweep_N.csv").string(), {"N", "decay_constant"});
    for (double N : values) {
      crd::RelEntropyTruncation trunc{16.0, N};
      csv.row({N, crd::measure_xi_star_decay(trunc, 2 * base.n_species, 20000, opts.seed)});
    }
  } else {
    std::cerr << "sweep: unknown axis '" << axis << "'\n";
    return kExitConfig;
  }
  write_meta(opts, "sweep", json{{"axis", axis}, {"values", values}});
  std::cout << "sweep over " << axis << " -> " << opts.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-volume simulator and verification harness for interface-coupled "
               "reaction-diffusion systems"};
  app.require_subcommand(1);

  CommonOpts sim_opts, ent_opts, stab_opts, res_opts, sweep_opts;
  CommonOpts vg_opts, vk_opts, vt_opts, va_opts;
  double perturbation = 1e-3, stab_E = 0.0, stab_N = 0.0;
  int levels = 3;
  std::string sweep_axis = "epsilon", suites = "geometry,kinetics,truncations,residual";
  std::vector<double> sweep_values;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write trajectory artifacts");
  add_common(sim, sim_opts);
  auto* vg = app.add_subcommand("verify-geometry", "reflection and partition-of-unity battery");
  add_common(vg, vg_opts, false);
  auto* vk = app.add_subcommand("verify-kinetics", "hypothesis validators and cosh consistency");
  add_common(vk, vk_opts, false);
  auto* vt = app.add_subcommand("verify-truncations", "projection-truncation property battery");
  add_common(vt, vt_opts, false);
  auto* va = app.add_subcommand("verify-all", "run verification suites");
  add_common(va, va_opts, false);
  va->add_option("--suites", suites, "comma-separated list of suites");
  auto* ent = app.add_subcommand("entropy-report", "run and report the entropy inequality");
  add_common(ent, ent_opts);
  auto* stab = app.add_subcommand("stability", "weak-strong stability experiment");
  add_common(stab, stab_opts);
  stab->add_option("--perturbation", perturbation, "relative initial-data perturbation");
  stab->add_option("--E", stab_E, "truncation level (default: from data)");
  stab->add_option("--N", stab_N, "truncation exponent (default 4)");
  auto* res = app.add_subcommand("renorm-residual", "truncated-formulation residual battery");
  add_common(res, res_opts);
  res->add_option("--levels", levels, "refinement levels");
  auto* sw = app.add_subcommand("sweep", "parameter sweep");
  add_common(sw, sweep_opts);
  sw->add_option("--axis", sweep_axis, "epsilon|resolution|E|N|dt");
  sw->add_option("--values", sweep_values, "axis values");

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (vg->parsed()) return cmd_verify(vg_opts, "geometry");
    if (vk->parsed()) return cmd_verify(vk_opts, "kinetics");
    if (vt->parsed()) return cmd_verify(vt_opts, "truncations");
    if (va->parsed()) return cmd_verify_all(va_opts, suites);
    if (ent->parsed()) return cmd_entropy_report(ent_opts);
    if (stab->parsed()) return cmd_stability(stab_opts, perturbation, stab_E, stab_N);
    if (res->parsed()) return cmd_renorm_residual(res_opts, levels);
    if (sw->parsed()) return cmd_sweep(sweep_opts, sweep_axis, sweep_values);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const crd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const crd::SolverAbort& e) {
    std::cerr << "runtime abort: " << e.what() << "\n";
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
