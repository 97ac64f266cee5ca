#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "coupledrd/entropy.hpp"
#include "coupledrd/geometry.hpp"
#include "coupledrd/gradient_structure.hpp"
#include "coupledrd/kinetics.hpp"

namespace crd {

/// Initial data evaluator: fills the per-species densities at a point.
using InitialFn = std::function<void(Side, Vec2, std::span<double>)>;

/// Everything needed to run one simulation.
struct Scenario {
  std::string name;
  Geometry geometry;
  int resolution = 8;
  int n_species = 1;

  DiffusionSpec diffusion;
  EntropyModel entropy;
  RatePack rates;           // unregularized base rates
  double epsilon = 1.0;     // regularization parameter; 0 disables damping

  InitialFn initial;

  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double t_end = 1.0;
  double output_every = 0.05;
  double cg_tol = 1e-10;
  double log_floor = 1e-30;  // density floor inside logarithms (diagnostics only)
  std::uint64_t seed = 1;

  // Descriptors retained for reporting when built from JSON.
  std::optional<ReactionNetwork> network;
  std::optional<TransmissionModel> transmission;

  RegularizedModel regularized() const { return RegularizedModel{epsilon, rates}; }

  void validate() const;
};

}  // namespace crd
