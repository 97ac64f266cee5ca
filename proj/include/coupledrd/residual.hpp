#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coupledrd/partition.hpp"
#include "coupledrd/profiles.hpp"
#include "coupledrd/reflection.hpp"
#include "coupledrd/rel_entropy.hpp"
#include "coupledrd/solver.hpp"
#include "coupledrd/truncation.hpp"

namespace crd {

/// C^2 truncation with compactly supported derivative, given by value and
/// analytic gradient callbacks.
struct SmoothTestFunction {
  std::string id;
  int dim = 1;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

/// Separable space-time test function psi(t, x) = T(t) X(x[0]) Y(x[1]) built
/// from C^2 interval plateaus; derivatives are analytic.
struct SpaceTimeBump {
  std::string id;
  IntervalPlateau tprof, xprof, yprof;

  double value(double t, Vec2 x) const {
    return tprof.value(t) * xprof.value(x[0]) * yprof.value(x[1]);
  }
  double dt(double t, Vec2 x) const {
    return tprof.d1(t) * xprof.value(x[0]) * yprof.value(x[1]);
  }
  Vec2 grad_x(double t, Vec2 x) const {
    return {tprof.value(t) * xprof.d1(x[0]) * yprof.value(x[1]),
            tprof.value(t) * xprof.value(x[0]) * yprof.d1(x[1])};
  }
  // Closed spatial support box.
  double x_lo() const { return xprof.a; }
  double x_hi() const { return xprof.d; }
  double y_lo() const { return yprof.a; }
  double y_hi() const { return yprof.d; }
  double support_distance_to(Vec2 p) const;
  double max_support_distance_from(Vec2 p) const;  // farthest box corner
};

/// Discrete residual of the truncated evolution identity on one compartment,
/// for test functions supported away from the interface. Signed; linear in
/// the truncation. Uses trapezoidal quadrature on the snapshot intervals with
/// the time-derivative terms assembled in Stieltjes form, so constant
/// truncations give an exactly zero residual.
double renorm_residual_outer(const Trajectory& traj, const Mesh& mesh, const Scenario& scenario,
                             const SmoothTestFunction& zeta, const SpaceTimeBump& psi, Side sigma);

/// Plain weak-formulation residual of one species (no truncation), same
/// quadrature; reference for the consistency check below the plateau.
double weak_residual_outer(const Trajectory& traj, const Mesh& mesh, const Scenario& scenario,
                           int species, const SpaceTimeBump& psi, Side sigma);

/// Discrete residual of the interface identity at one anchor: truncations act
/// on the stacked state (u, reflected u), the test function is supported in
/// the anchor neighbourhood, and the opposite-compartment terms are composed
/// with the reflection map by evaluating at reflected cell centers.
double renorm_residual_interface(const Trajectory& traj, const Mesh& mesh,
                                 const Scenario& scenario, const SmoothTestFunction& xi,
                                 const ReflectionMap& map, const SpaceTimeBump& psi, Side sigma);

std::vector<SmoothTestFunction> default_zeta_battery(int n_species);
std::vector<SmoothTestFunction> default_xi_battery(int n_species);

/// Test functions for the default residual batteries.
SmoothTestFunction coordinate_plateau(int dim, int j, double level);
SmoothTestFunction l1_plateau(int dim, double E, double N);
SmoothTestFunction constant_fn(int dim, double c);

struct ResidualLevelResult {
  double h = 0.0, dt = 0.0;
  double outer = 0.0;       // max |residual| over the outer battery
  double interface_ = 0.0;  // max |residual| over the interface battery
  double weak_consistency = 0.0;  // |renormalised - plain weak| below the plateau
};

/// Runs the scenario refined by 2^level in space and 4^level in time (with
/// matching snapshot cadence) and evaluates the default residual batteries at
/// the central interface anchor.
ResidualLevelResult run_residual_level(const Scenario& base, int level);

}  // namespace crd
