#pragma once

#include "coupledrd/mesh.hpp"
#include "coupledrd/scenario.hpp"
#include "coupledrd/solver.hpp"
#include "coupledrd/state.hpp"

namespace crd {

/// Total entropy: sum over cells of volume * h(u).
double total_entropy(const StateField& state, const Mesh& mesh, const EntropyModel& entropy);

struct DissipationBreakdown {
  double bulk_plus = 0.0;
  double bulk_minus = 0.0;
  double interface_ = 0.0;

  double bulk() const { return bulk_plus + bulk_minus; }
  double total() const { return bulk() + interface_; }
};

/// Discrete entropy dissipation of one state: the diffusive Dirichlet form of
/// sqrt(u) (4 sum a_f (d sqrt(u))^2 per face), the reaction term
/// -sum f_i(u) log u_i per cell, and the interface term
/// sum_i r_i (log u_i^+ - log u_i^-) per interface face. Rates are the
/// scenario's regularized rates; densities are floored at scenario.log_floor
/// inside logarithms.
DissipationBreakdown dissipation(const StateField& state, const Mesh& mesh,
                                 const Scenario& scenario);

struct DefectSeries {
  std::vector<double> t;
  std::vector<double> defect;  // H(t) + sum dt * D - H(0)
  double max_positive = 0.0;
};

/// Entropy-inequality defect along a trajectory, assembled from the ledger.
DefectSeries entropy_inequality_check(const Trajectory& traj);

}  // namespace crd
