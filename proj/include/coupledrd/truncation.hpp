#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coupledrd/core.hpp"

namespace crd {

/// Smooth approximation of the coordinate projections on [0,inf)^m:
/// xi_j(u) = (u_j - 3E) w(sum u_i / E - 1) + 3E with a C^2 cutoff w.
/// Below total mass E it is the exact projection; above 2E it is constant.
struct ProjectionTruncation {
  double E = 4.0;
  int dim = 2;  // number of variables (2n for stacked interface states)

  double value(int j, std::span<const double> u) const;
  void gradient(int j, std::span<const double> u, std::span<double> out) const;
  /// Hessian, row-major dim x dim.
  void hessian(int j, std::span<const double> u, std::span<double> out) const;
};

struct VPropertyReport {
  // Exact identities (max absolute error over constructed samples).
  double projection_error = 0.0;       // value - u_j where sum u <= E
  double plateau_error = 0.0;          // value - 3E where sum u >= 2E
  double small_image_error = 0.0;      // value - u_j where sum_j xi_j <= E
  // Uniform bounds (max over samples, per truncation level).
  std::vector<double> sup_gradient;      // per E
  std::vector<double> sup_scaled_hessian;  // max sqrt(u_i u_k) |D_i D_k xi_j|, per E
  // Limits along the E sequence at fixed samples.
  std::vector<double> gradient_limit_defect;  // max |D_i xi_j - delta_ij|, per E
  std::vector<double> hessian_sup;            // sup over |u|_1 <= K of |D_i D_k xi_j|, per E
  std::vector<double> E_sequence;

  bool pass(double growth_factor = 1.5) const;
};

/// Samples the structural properties of the family along an increasing
/// sequence of truncation levels.
VPropertyReport verify_V_properties(int dim, const std::vector<double>& E_sequence,
                                    int sample_budget, std::uint64_t seed = 7);

}  // namespace crd
