#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coupledrd/entropy.hpp"
#include "coupledrd/kinetics.hpp"

namespace crd {

/// Dual dissipation primitive 4(cosh(r/2) - 1) and its derivative 2 sinh(r/2).
/// At logarithmic arguments the derivative produces mass-action differences:
/// deriv(log r) = sqrt(r) - 1/sqrt(r).
std::pair<double, double> cosh_potential(double r);

/// Cosh-type dissipation structure whose induced rates must coincide with the
/// mass-action and transmission rate families. The interface part is a sum of
/// channels with signed direction vectors lambda and concentration-product
/// coefficients.
struct GradientStructure {
  ReactionNetwork network;

  struct InterfaceChannel {
    std::vector<int> lambda;    // signed direction (jump weights)
    std::vector<int> min_exp;   // extra symmetric product exponents
    double k = 1.0;
    std::string coefficient_form = "constant";  // same registry as TransmissionModel
  };
  std::vector<InterfaceChannel> channels;

  /// Builds the channel list reproducing a transmission model exactly:
  /// one channel with lambda = gamma - delta for the polynomial variant,
  /// per-species unit channels for the linear variant.
  static GradientStructure from_models(const ReactionNetwork& network,
                                       const TransmissionModel& transmission);

  /// Bulk reaction rate induced by the structure at the entropy gradient:
  /// kappa(u) * deriv((alpha-beta) . (-Dh(u))) * (alpha - beta).
  /// Requires u > 0 componentwise.
  std::vector<double> bulk_rate(std::span<const double> u, Side s,
                                const EntropyModel& entropy) const;

  /// Plus-side interface rate induced by the structure:
  /// sum_l kappa_l(u) * deriv(lambda_l . (Dh(u+) - Dh(u-))) * lambda_l.
  std::vector<double> interface_rate(std::span<const double> up, std::span<const double> um,
                                     const EntropyModel& entropy) const;
};

/// Per-species diagonal diffusion tensors, constant on each compartment.
struct DiffusionSpec {
  // [species][side][axis]
  std::vector<std::array<std::array<double, 2>, 2>> coeff;

  double value(int species, Side s, int axis) const {
    return coeff[static_cast<std::size_t>(species)][static_cast<int>(s)][axis];
  }
  static DiffusionSpec isotropic(int n_species, double a_plus, double a_minus);

  /// Smallest eigenvalue over species, sides, and axes; ellipticity requires
  /// this to be positive.
  double ellipticity() const;
};

}  // namespace crd
