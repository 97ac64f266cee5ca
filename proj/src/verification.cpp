#include "coupledrd/verification.hpp"

#include <cmath>
#include <random>

#include "coupledrd/gradient_structure.hpp"
#include "coupledrd/scenario_io.hpp"

namespace crd {

std::vector<ModelCase> builtin_model_battery() {
  std::vector<ModelCase> cases;

  auto entropy_for = [](int n) {
    EntropyModel e;
    e.n = n;
    return e;
  };

  {
    ModelCase mc;
    mc.name = "mass_action_A_B_linear";
    ReactionNetwork net;
    net.n = 2;
    net.alpha = {1, 0};
    net.beta = {0, 1};
    net.k_plus = 1.0;
    net.k_minus = 0.8;
    TransmissionModel tm;
    tm.kind = TransmissionKind::Linear;
    tm.n = 2;
    tm.k_species = {1.0, 2.0};
    mc.network = net;
    mc.transmission = tm;
    mc.rates = make_rates(mc.network, mc.transmission, 2);
    mc.entropy = entropy_for(2);
    cases.push_back(std::move(mc));
  }
  {
    ModelCase mc;
    mc.name = "mass_action_2A_B_polynomial";
    ReactionNetwork net;
    net.n = 2;
    net.alpha = {2, 0};
    net.beta = {0, 1};
    net.k_plus = 0.7;
    net.k_minus = 0.7;
    TransmissionModel tm;
    tm.kind = TransmissionKind::Polynomial;
    tm.n = 2;
    tm.gamma = {1, 0};
    tm.delta = {0, 1};
    tm.k_gamma = 1.3;
    mc.network = net;
    mc.transmission = tm;
    mc.rates = make_rates(mc.network, mc.transmission, 2);
    mc.entropy = entropy_for(2);
    cases.push_back(std::move(mc));
  }
  {
    ModelCase mc;
    mc.name = "nonlinear_coefficient_geometric_mean";
    TransmissionModel tm;
    tm.kind = TransmissionKind::NonlinearCoefficient;
    tm.n = 2;
    tm.gamma = {2, 1};
    tm.k_species = {0.5, 1.5};
    tm.coefficient_form = "geometric_mean";
    mc.transmission = tm;
    mc.rates = make_rates(mc.network, mc.transmission, 2);
    mc.entropy = entropy_for(2);
    cases.push_back(std::move(mc));
  }
  {
    ModelCase mc;
    mc.name = "polynomial_with_references";
    ReactionNetwork net;
    net.n = 2;
    net.alpha = {1, 0};
    net.beta = {0, 2};
    net.k_plus = 0.4;
    net.k_minus = 0.9;
    net.ref_plus = {2.0, 0.5};
    net.ref_minus = {1.5, 1.0};
    TransmissionModel tm;
    tm.kind = TransmissionKind::Polynomial;
    tm.n = 2;
    tm.gamma = {0, 2};
    tm.delta = {1, 0};
    tm.k_gamma = 0.6;
    tm.ref_plus = net.ref_plus;
    tm.ref_minus = net.ref_minus;
    mc.network = net;
    mc.transmission = tm;
    mc.rates = make_rates(mc.network, mc.transmission, 2);
    EntropyModel e;
    e.n = 2;
    e.ref_plus = net.ref_plus;
    e.ref_minus = net.ref_minus;
    mc.entropy = e;
    cases.push_back(std::move(mc));
  }
  return cases;
}

GeometrySuiteResult verify_geometry_suite(std::uint64_t seed) {
  GeometrySuiteResult res;
  res.details = nlohmann::json::array();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  for (std::string tmpl : {"flat_symmetric", "triple_junction"}) {
    Geometry g = build_geometry(nlohmann::json{{"template", tmpl}});
    std::vector<Vec2> anchors;
    std::vector<double> radii;
    default_anchors(g, anchors, radii);

    std::vector<ReflectionMap> maps;
    for (std::size_t b = 0; b < anchors.size(); ++b)
      maps.push_back(reflection_map(g, anchors[b], radii[b]));
    if (tmpl == "triple_junction")
      maps.push_back(reflection_map(g, g.interface.endpoint_hi(), 0.15));

    for (const ReflectionMap& m : maps) {
      ReflectionReport rep = verify_reflection(m, g, 1000, m.radius() / 50.0, seed);
      res.max_involution = std::max(res.max_involution, rep.involution_defect);
      res.max_interface_fixed = std::max(res.max_interface_fixed, rep.interface_fixed_defect);
      res.max_det_defect = std::max(res.max_det_defect, rep.det_defect);
      res.max_boundary_defect = std::max(res.max_boundary_defect, rep.boundary_map_defect);
      res.details.push_back({{"template", tmpl},
                             {"anchor", {m.anchor()[0], m.anchor()[1]}},
                             {"kind", m.kind() == ReflectionMap::Kind::Hypograph ? "hypograph" : "mirror"},
                             {"involution", rep.involution_defect},
                             {"interface_fixed", rep.interface_fixed_defect},
                             {"det_defect", rep.det_defect},
                             {"det_samples", rep.det_samples},
                             {"boundary_map", rep.boundary_map_defect}});
    }

    PartitionOfUnity pou = PartitionOfUnity::build(g, anchors, radii);
    double part_defect = 0.0;
    double outer_on_interface = 0.0;
    double range_violation = 0.0;
    double xmin = -1.0, xmax = 1.0;
    for (int k = 0; k < 10000; ++k) {
      Vec2 p{xmin + (xmax - xmin) * u01(rng), u01(rng)};
      if (!g.plus.contains(p) && !g.minus.contains(p) && !g.on_interface(p, 1e-9)) continue;
      double s = pou.phi_out(p);
      range_violation = std::max({range_violation, -s, s - 1.0});
      for (std::size_t b = 0; b < pou.size(); ++b) {
        double phi = pou.phi(b, p);
        range_violation = std::max({range_violation, -phi, phi - 1.0});
        s += phi;
      }
      part_defect = std::max(part_defect, std::abs(s - 1.0));
    }
    for (int k = 0; k <= 10000; ++k)
      outer_on_interface =
          std::max(outer_on_interface, pou.phi_out(g.interface.point(k / 10000.0)));
    res.max_partition_defect = std::max(res.max_partition_defect, part_defect);
    res.details.push_back({{"template", tmpl},
                           {"partition_identity_defect", part_defect},
                           {"phi_out_on_interface", outer_on_interface},
                           {"phi_range_violation", range_violation}});
    if (outer_on_interface > 0.0 || range_violation > 0.0) res.pass = false;
  }

  res.pass = res.pass && res.max_involution <= 1e-10 && res.max_interface_fixed <= 1e-10 &&
             res.max_det_defect <= 1e-6 && res.max_boundary_defect <= 1e-9 &&
             res.max_partition_defect <= 1e-12;
  return res;
}

KineticsSuiteResult verify_kinetics_suite(int n_samples, std::uint64_t seed) {
  KineticsSuiteResult res;
  res.details = nlohmann::json::array();

  for (const ModelCase& mc : builtin_model_battery()) {
    HypothesisReport rep = validate_hypotheses(mc.rates, mc.entropy, n_samples, seed);
    res.max_bulk_dissipation = std::max(res.max_bulk_dissipation, rep.bulk_dissipation_violation);
    res.max_interface_dissipation =
        std::max(res.max_interface_dissipation, rep.interface_dissipation_violation);
    res.max_mass_defect = std::max(res.max_mass_defect, rep.mass_preservation_defect);
    res.max_quasi_positivity =
        std::max({res.max_quasi_positivity, rep.bulk_quasi_positivity_violation,
                  rep.interface_quasi_positivity_violation});
    res.details.push_back({{"model", mc.name},
                           {"bulk_dissipation_violation", rep.bulk_dissipation_violation},
                           {"interface_dissipation_violation", rep.interface_dissipation_violation},
                           {"mass_preservation_defect", rep.mass_preservation_defect},
                           {"bulk_quasi_positivity", rep.bulk_quasi_positivity_violation},
                           {"interface_quasi_positivity", rep.interface_quasi_positivity_violation}});
  }

  // Cosh-structure consistency against the explicit rate families.
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> log10u(-3.0, 3.0);
  for (const ModelCase& mc : builtin_model_battery()) {
    if (!mc.network && !mc.transmission) continue;
    GradientStructure gs;
    if (mc.network && mc.transmission) {
      gs = GradientStructure::from_models(*mc.network, *mc.transmission);
    } else if (mc.transmission) {
      ReactionNetwork none;
      none.n = mc.transmission->n;
      none.alpha.assign(static_cast<std::size_t>(none.n), 0);
      none.beta.assign(static_cast<std::size_t>(none.n), 0);
      gs = GradientStructure::from_models(none, *mc.transmission);
    } else {
      continue;
    }
    const int n = mc.entropy.n;
    std::vector<double> up(static_cast<std::size_t>(n)), um(static_cast<std::size_t>(n));
    std::vector<double> fa(static_cast<std::size_t>(n));
    double worst = 0.0;
    for (int k = 0; k < n_samples; ++k) {
      for (double& x : up) x = std::pow(10.0, log10u(rng));
      for (double& x : um) x = std::pow(10.0, log10u(rng));
      if (mc.network) {
        for (Side s : {Side::Plus, Side::Minus}) {
          std::span<const double> u = s == Side::Plus ? up : um;
          mc.network->rate(u, s, fa);
          std::vector<double> fg = gs.bulk_rate(u, s, mc.entropy);
          double scale = 0.0, diff = 0.0;
          for (int i = 0; i < n; ++i) {
            scale = std::max(scale, std::abs(fa[static_cast<std::size_t>(i)]));
            diff = std::max(diff, std::abs(fa[static_cast<std::size_t>(i)] -
                                           fg[static_cast<std::size_t>(i)]));
          }
          if (scale > 0.0) worst = std::max(worst, diff / scale);
        }
      }
      if (mc.transmission) {
        std::vector<double> ra = mc.transmission->rate(up, um);
        std::vector<double> rg = gs.interface_rate(up, um, mc.entropy);
        double scale = 0.0, diff = 0.0;
        for (int i = 0; i < n; ++i) {
          scale = std::max(scale, std::abs(ra[static_cast<std::size_t>(i)]));
          diff = std::max(diff,
                          std::abs(ra[static_cast<std::size_t>(i)] - rg[static_cast<std::size_t>(i)]));
        }
        if (scale > 0.0) worst = std::max(worst, diff / scale);
      }
    }
    res.max_gradient_consistency_rel = std::max(res.max_gradient_consistency_rel, worst);
    res.details.push_back({{"model", mc.name}, {"gradient_consistency_rel", worst}});
  }

  res.pass = res.max_bulk_dissipation <= 1e-12 && res.max_interface_dissipation <= 1e-12 &&
             res.max_mass_defect == 0.0 && res.max_quasi_positivity <= 1e-12 &&
             res.max_gradient_consistency_rel <= 1e-10;
  return res;
}

double measure_xi_star_decay(const RelEntropyTruncation& trunc, int dim, int samples,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(dim));
  std::vector<double> g(static_cast<std::size_t>(dim));
  double sup = 0.0;
  double logE = std::log(trunc.E);
  for (int k = 0; k < samples; ++k) {
    // Log-uniform radius across the transition region (E, E^N).
    double r = std::exp(logE * (1.0 + (trunc.N - 1.0) * u01(rng)));
    for (double& x : u) x = u01(rng);
    double m = sum(u);
    for (double& x : u) x *= r / m;
    trunc.xi_star_grad(u, g);
    double norm2 = 0.0;
    for (double x : g) norm2 += x * x;
    sup = std::max(sup, sum(u) * std::sqrt(norm2));
  }
  return sup;
}

TruncationSuiteResult verify_truncation_suite(int sample_budget, std::uint64_t seed) {
  TruncationSuiteResult res;
  res.details = nlohmann::json::array();

  for (int dim : {2, 4}) {
    VPropertyReport rep = verify_V_properties(dim, {4.0, 16.0, 64.0}, sample_budget, seed);
    bool ok = rep.pass(1.5);
    res.pass = res.pass && ok;
    res.details.push_back({{"dim", dim},
                           {"pass", ok},
                           {"projection_error", rep.projection_error},
                           {"plateau_error", rep.plateau_error},
                           {"small_image_error", rep.small_image_error},
                           {"sup_gradient", rep.sup_gradient},
                           {"sup_scaled_hessian", rep.sup_scaled_hessian},
                           {"gradient_limit_defect", rep.gradient_limit_defect},
                           {"hessian_sup", rep.hessian_sup}});
  }

  // Gradient decay of the relative-entropy truncation: the measured constant
  // must halve within a factor of two as N doubles.
  for (double N : {2.0, 4.0, 8.0}) {
    RelEntropyTruncation trunc{16.0, N};
    res.xi_star_decay.push_back(measure_xi_star_decay(trunc, 4, 20000, seed));
  }
  for (std::size_t k = 1; k < res.xi_star_decay.size(); ++k) {
    double ratio = res.xi_star_decay[k - 1] / res.xi_star_decay[k];
    if (ratio < 1.0 || ratio > 4.0) res.pass = false;
  }
  res.details.push_back({{"xi_star_decay_by_N", res.xi_star_decay}});
  return res;
}

}  // namespace crd
