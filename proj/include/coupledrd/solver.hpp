#pragma once

#include <vector>

#include "coupledrd/mesh.hpp"
#include "coupledrd/scenario.hpp"
#include "coupledrd/state.hpp"

namespace crd {

/// Two-point-flux finite-volume diffusion operator for one species:
/// (L u)_c = (1/vol_c) sum_faces area * a_f * (u_nb - u_c) / dist with the
/// harmonic mean of the normal diffusivity on each interior face. Interface
/// faces carry no diffusive coupling and outer faces are no-flux, so row sums
/// vanish and constants lie in the kernel.
class DiffusionOperator {
 public:
  DiffusionOperator(const Mesh& mesh, const DiffusionSpec& diffusion, int species);

  void apply(std::span<const double> u, std::span<double> out) const;

  /// out = u - dt * L u.
  void apply_backward_euler(std::span<const double> u, double dt, std::span<double> out) const;

  struct FaceCoeff {
    int c0, c1;
    double trans;  // area * a_f / dist
  };
  const std::vector<FaceCoeff>& face_coefficients() const { return faces_; }

 private:
  int n_ = 0;
  std::vector<FaceCoeff> faces_;
  std::vector<double> inv_vol_;
};

/// Conjugate gradient for the SPD backward-Euler system. Returns the
/// iteration count; throws SolverAbort if the relative residual target is not
/// reached.
int conjugate_gradient(const DiffusionOperator& op, double dt, std::span<const double> rhs,
                       std::span<double> x, double rel_tol, int max_iter);

struct LedgerRow {
  double t = 0.0, dt = 0.0;
  std::vector<double> mass_plus, mass_minus;  // per species
  double entropy = 0.0;
  double dissipation_bulk = 0.0;  // both compartments
  double dissipation_interface = 0.0;
  double floored_mass = 0.0;  // cumulative
};

struct Trajectory {
  std::vector<StateField> snapshots;
  std::vector<LedgerRow> ledger;
  bool aborted = false;
  std::string abort_reason;

  const StateField& at_time(double t) const;
};

/// Semi-implicit time stepper: backward-Euler diffusion per species and
/// compartment, explicit regularized reaction and interface-flux sources
/// evaluated at the old state, then a floor at zero with the clipped mass
/// recorded. The final update is assembled in flux form so that total mass
/// is conserved independent of the linear-solver tolerance.
class Solver {
 public:
  Solver(const Scenario& scenario, const Mesh& mesh);

  StateField initial_state() const;

  struct StepStats {
    double floored_mass = 0.0;
    double max_relative_change = 0.0;  // of the explicit sources
    int cg_iterations = 0;
  };

  StateField step(const StateField& state, double dt, StepStats* stats = nullptr) const;

  /// Runs to t_end with the adaptive step controller (20% explicit-change cap,
  /// halve on violation, grow 1.2x after 10 clean steps) and snapshots at
  /// exact multiples of output_every.
  Trajectory run() const;

  /// Adjacent-cell densities on one side of each interface face,
  /// [face * n_species + species].
  std::vector<double> interface_trace(const StateField& state, Side side) const;

  const Mesh& mesh() const { return *mesh_; }
  const Scenario& scenario() const { return *scenario_; }

  /// Explicit source (reaction + interface flux) at the given state.
  void explicit_source(const StateField& state, std::vector<double>& src) const;

 private:
  const Scenario* scenario_;
  const Mesh* mesh_;
  std::vector<DiffusionOperator> ops_;  // per species
  RegularizedModel model_;
  double density_scale_ = 1.0;  // reference scale for the relative-change cap
};

}  // namespace crd
