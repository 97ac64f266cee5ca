#pragma once

#include <string>
#include <vector>

#include "coupledrd/kinetics.hpp"
#include "coupledrd/partition.hpp"
#include "coupledrd/reflection.hpp"
#include "coupledrd/rel_entropy.hpp"
#include "coupledrd/truncation.hpp"

#include "json.hpp"

namespace crd {

/// Named rate pack for the model verification battery.
struct ModelCase {
  std::string name;
  RatePack rates;
  EntropyModel entropy;
  std::optional<ReactionNetwork> network;
  std::optional<TransmissionModel> transmission;
};

/// The built-in model battery: mass-action reactions and each transmission
/// family.
std::vector<ModelCase> builtin_model_battery();

struct GeometrySuiteResult {
  bool pass = true;
  double max_involution = 0.0;
  double max_interface_fixed = 0.0;
  double max_det_defect = 0.0;
  double max_boundary_defect = 0.0;
  double max_partition_defect = 0.0;
  nlohmann::json details;
};

/// Reflection and partition-of-unity battery over both geometry templates.
GeometrySuiteResult verify_geometry_suite(std::uint64_t seed = 11);

struct KineticsSuiteResult {
  bool pass = true;
  double max_bulk_dissipation = 0.0;
  double max_interface_dissipation = 0.0;
  double max_mass_defect = 0.0;
  double max_quasi_positivity = 0.0;
  double max_gradient_consistency_rel = 0.0;  // cosh structure vs rate families
  nlohmann::json details;
};

KineticsSuiteResult verify_kinetics_suite(int n_samples = 10000, std::uint64_t seed = 11);

struct TruncationSuiteResult {
  bool pass = true;
  nlohmann::json details;
  std::vector<double> xi_star_decay;  // sup |u|_1 |D xi*| per N in {2,4,8}
};

TruncationSuiteResult verify_truncation_suite(int sample_budget = 2000, std::uint64_t seed = 11);

/// Measured decay constant of the relative-entropy truncation gradient:
/// sup over the transition region of |u|_1 |D xi*|.
double measure_xi_star_decay(const RelEntropyTruncation& trunc, int dim, int samples,
                             std::uint64_t seed);

}  // namespace crd
