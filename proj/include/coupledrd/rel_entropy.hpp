#pragma once

#include <vector>

#include "coupledrd/partition.hpp"
#include "coupledrd/reflection.hpp"
#include "coupledrd/solver.hpp"

namespace crd {

/// Logarithmic truncations for the relative entropy. The scalar profile is
/// 1 for r <= E, eta((log r - log E)/((N-1) log E)) for E < r <= E^N, and 0
/// beyond, applied to the l1 norm of the argument vector.
struct RelEntropyTruncation {
  double E = 16.0;
  double N = 4.0;

  double profile(double r) const;        // xi-hat
  double profile_deriv(double r) const;  // d/dr

  /// Truncation of a stacked (u, u-tilde) vector and its analytic gradient.
  double xi_star(std::span<const double> utilde) const;
  void xi_star_grad(std::span<const double> utilde, std::span<double> out) const;

  /// Same construction on u alone.
  double zeta_star(std::span<const double> u) const { return profile_of_l1(u); }
  void zeta_star_grad(std::span<const double> u, std::span<double> out) const;

  double profile_of_l1(std::span<const double> v) const;
};

/// Cell classification for the truncated relative entropy.
enum class RelEntropyClass : int { Good = 0, Positive = 1, Bad = 2 };

struct RelEntropyState {
  std::vector<double> chi;           // per cell
  std::vector<RelEntropyClass> cls;  // per cell
  double H_rel = 0.0;
  double frac_good = 0.0, frac_positive = 0.0, frac_bad = 0.0;
  double sqrt_distance = 0.0;  // integral of sum_i (sqrt(u_i) - sqrt(U_i))^2
  double measure_bad = 0.0;    // Lebesgue measure of the bad set
};

/// Reference trajectory playing the strong solution, with its positivity
/// floor and a finite-difference Lipschitz estimate.
struct StrongSolutionProfile {
  std::vector<StateField> snapshots;
  double iota = 0.0;       // min density over the analyzed window
  double lipschitz = 0.0;  // max face-difference slope over the window

  const StateField& at_time(double t) const;
};

/// Runs the scenario at refine * resolution and restricts cell averages to
/// the coarse mesh; refine = 1 reuses the scenario mesh directly.
StrongSolutionProfile strong_surrogate(const Scenario& scenario, const Mesh& coarse_mesh,
                                       int refine = 1);

/// Truncated relative entropy of u against the reference U on the same mesh.
/// chi(x, u-hat) combines the outer truncation with the per-anchor reflected
/// truncations through the partition of unity; the integrand is assembled
/// from Bregman differences so it is exact in the good set and independent of
/// the entropy shift convention.
RelEntropyState relative_entropy(const StateField& u, const StateField& U, const Mesh& mesh,
                                 const PartitionOfUnity& pou,
                                 const std::vector<ReflectionMap>& maps,
                                 const RelEntropyTruncation& trunc, const EntropyModel& entropy);

/// Relative dissipation-distance density integrated over the mesh:
/// sum_faces trans-weighted | d sqrt(u) - sqrt(u/U) d sqrt(U) |^2.
double d_rel_integral(const StateField& u, const StateField& U, const Mesh& mesh);

/// Interfacial square-root distance of the traces: integral over the
/// interface of sum_i (sqrt(u_i) - sqrt(U_i))^2 from the given side.
double e_rel_interface(const StateField& u, const StateField& U, const Mesh& mesh, Side side);

struct CoercivityReport {
  double threshold_E = 0.0;  // estimated admissible truncation level
  bool threshold_ok = false;
  double min_ratio_sqrt = 0.0;  // min H_rel / integral |sqrt u - sqrt U|^2
  double min_ratio_bad = 0.0;   // min H_rel / (E log E |S_b|) over states with S_b
  double min_H_rel = 0.0;
  int n_states = 0;
};

/// Empirical coercivity constants over a battery of perturbed states.
CoercivityReport coercivity_check(const std::vector<StateField>& states, const StateField& U,
                                  const Mesh& mesh, const PartitionOfUnity& pou,
                                  const std::vector<ReflectionMap>& maps,
                                  const RelEntropyTruncation& trunc, const EntropyModel& entropy);

struct StabilityResult {
  std::vector<double> t;
  std::vector<double> H_rel;
  std::vector<double> frac_good, frac_positive, frac_bad;
  double H_rel_0 = 0.0;
  double H_rel_T = 0.0;
  double fitted_C = 0.0;  // smallest C with H_rel(t) <= exp(C t) H_rel(0)
};

/// Smooth multiplicative perturbation pattern used by the stability runs.
double perturbation_pattern(Vec2 x);

/// Runs the scenario twice (reference and perturbed initial data) and tracks
/// the truncated relative entropy at the snapshot times. Aborts if the
/// reference loses positivity (min density below iota_floor).
StabilityResult stability_experiment(const Scenario& scenario, const Mesh& mesh,
                                     double perturbation_amplitude,
                                     const PartitionOfUnity& pou,
                                     const std::vector<ReflectionMap>& maps,
                                     const RelEntropyTruncation& trunc,
                                     double iota_floor = 1e-8);

}  // namespace crd
