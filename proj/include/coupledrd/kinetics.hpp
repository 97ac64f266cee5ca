#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coupledrd/entropy.hpp"
#include "coupledrd/state.hpp"

#include "json.hpp"

namespace crd {

/// Single reversible mass-action reaction with per-compartment rate constants.
struct ReactionNetwork {
  int n = 1;
  std::vector<int> alpha, beta;       // stoichiometry, length n
  double k_plus = 0.0, k_minus = 0.0;
  std::vector<double> ref_plus, ref_minus;  // empty means all ones

  double ref(Side s, int i) const {
    const auto& r = s == Side::Plus ? ref_plus : ref_minus;
    return r.empty() ? 1.0 : r[static_cast<std::size_t>(i)];
  }
  double rate_constant(Side s) const { return s == Side::Plus ? k_plus : k_minus; }

  /// f_i(u) = -k (alpha_i - beta_i) (prod ubar^alpha - prod ubar^beta).
  void rate(std::span<const double> u, Side s, std::span<double> f) const;
  std::vector<double> rate(std::span<const double> u, Side s) const;
};

enum class TransmissionKind { Linear, Polynomial, NonlinearCoefficient };

/// Interface transmission rates. rate() returns the plus-side rate r_i;
/// the minus-side rate is its exact negative (mass preservation holds by
/// construction).
struct TransmissionModel {
  TransmissionKind kind = TransmissionKind::Linear;
  int n = 1;
  std::vector<double> k_species;      // Linear / NonlinearCoefficient scale
  std::vector<int> gamma, delta;      // Polynomial stoichiometry; gamma doubles
                                      // as the exponent vector of the
                                      // nonlinear-coefficient variant
  double k_gamma = 0.0;
  std::string coefficient_form = "constant";  // registered k_i(u+,u-) shape
  std::vector<double> ref_plus, ref_minus;

  double ref(Side s, int i) const {
    const auto& r = s == Side::Plus ? ref_plus : ref_minus;
    return r.empty() ? 1.0 : r[static_cast<std::size_t>(i)];
  }

  void rate(std::span<const double> up, std::span<const double> um, std::span<double> r) const;
  std::vector<double> rate(std::span<const double> up, std::span<const double> um) const;

  static const std::vector<std::string>& coefficient_registry();
};

/// Bulk rate evaluator: f(side, u, out). Built-in models wrap ReactionNetwork;
/// tests may provide arbitrary evaluators.
using BulkRateFn = std::function<void(Side, std::span<const double>, std::span<double>)>;
/// Interface rate evaluator returning the plus-side rate vector r.
using TransmissionRateFn =
    std::function<void(std::span<const double>, std::span<const double>, std::span<double>)>;

struct RatePack {
  int n = 1;
  BulkRateFn f;           // may be null (no reactions)
  TransmissionRateFn r;   // may be null (no transmission)

  void bulk(Side s, std::span<const double> u, std::span<double> out) const;
  void transmission(std::span<const double> up, std::span<const double> um,
                    std::span<double> out) const;
};

RatePack make_rates(const std::optional<ReactionNetwork>& network,
                    const std::optional<TransmissionModel>& transmission, int n);

/// Rates damped by 1/(1 + eps |rate vector|), with the Euclidean norm of the
/// full rate vector in the denominator. Bounded by 1/eps componentwise and
/// sign-preserving; eps = 0 disables the damping.
struct RegularizedModel {
  double epsilon = 0.0;
  RatePack base;

  void f_eps(Side s, std::span<const double> u, std::span<double> out) const;
  void r_eps(std::span<const double> up, std::span<const double> um, std::span<double> out) const;
};

RegularizedModel regularize(RatePack base, double epsilon);  // epsilon in (0,1]

/// Componentwise clip at 1/eps.
StateField clip_initial_data(const StateField& u0, double epsilon);

struct HypothesisReport {
  double bulk_dissipation_violation = 0.0;      // max(0, f . Dh) over samples
  double interface_dissipation_violation = 0.0; // max(0, -(sum_sigma r^sigma . Dh))
  double mass_preservation_defect = 0.0;        // max |r+ + r-|
  double bulk_quasi_positivity_violation = 0.0; // max(0, -f_i) at u_i = 0
  double interface_quasi_positivity_violation = 0.0;  // max(0, r_i^sigma) at u_i^sigma = 0
  int n_samples = 0;

  bool pass(double tol = 1e-12) const;
};

/// Samples the structural hypotheses on log-uniform positive states in
/// [1e-3, 1e3]^n and on random boundary states with zeroed coordinates.
/// Report-only: a nonconforming model is flagged, not rejected.
HypothesisReport validate_hypotheses(const RatePack& rates, const EntropyModel& entropy,
                                     int n_samples, std::uint64_t seed = 2024);

ReactionNetwork reaction_from_json(const nlohmann::json& j);
std::optional<TransmissionModel> transmission_from_json(const nlohmann::json& j);

}  // namespace crd
