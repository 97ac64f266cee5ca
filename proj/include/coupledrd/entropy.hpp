#pragma once

#include <span>
#include <vector>

#include "coupledrd/core.hpp"

namespace crd {

/// Boltzmann function r log r - r, optionally shifted by +1 so that it is
/// non-negative with minimum 0 at r = 1. Uses the 0 log 0 := 0 convention.
double boltzmann(double r, bool shifted);

/// Componentwise Boltzmann entropy with positive reference densities.
struct EntropyModel {
  int n = 1;
  std::vector<double> ref_plus;   // empty means all ones
  std::vector<double> ref_minus;
  bool shifted = true;

  double ref(Side s, int i) const {
    const auto& r = s == Side::Plus ? ref_plus : ref_minus;
    return r.empty() ? 1.0 : r[static_cast<std::size_t>(i)];
  }

  /// h(u) = sum_i ref_i * B(u_i / ref_i).
  double h(std::span<const double> u, Side s = Side::Plus) const;

  /// D_i h(u) = log(u_i / ref_i). Requires u > 0 componentwise.
  void grad(std::span<const double> u, Side s, std::span<double> out) const;
  std::vector<double> grad(std::span<const double> u, Side s = Side::Plus) const;
};

}  // namespace crd
