#include "coupledrd/gradient_structure.hpp"

#include <algorithm>
#include <cmath>

namespace crd {

std::pair<double, double> cosh_potential(double r) {
  return {4.0 * (std::cosh(0.5 * r) - 1.0), 2.0 * std::sinh(0.5 * r)};
}

GradientStructure GradientStructure::from_models(const ReactionNetwork& network,
                                                 const TransmissionModel& transmission) {
  GradientStructure gs;
  gs.network = network;
  const int n = transmission.n;
  switch (transmission.kind) {
    case TransmissionKind::Linear:
      for (int i = 0; i < n; ++i) {
        InterfaceChannel ch;
        ch.lambda.assign(static_cast<std::size_t>(n), 0);
        ch.min_exp.assign(static_cast<std::size_t>(n), 0);
        ch.lambda[static_cast<std::size_t>(i)] = 1;
        ch.k = transmission.k_species[static_cast<std::size_t>(i)];
        gs.channels.push_back(std::move(ch));
      }
      break;
    case TransmissionKind::Polynomial: {
      InterfaceChannel ch;
      ch.k = transmission.k_gamma;
      for (int i = 0; i < n; ++i) {
        std::size_t q = static_cast<std::size_t>(i);
        ch.lambda.push_back(transmission.gamma[q] - transmission.delta[q]);
        ch.min_exp.push_back(std::min(transmission.gamma[q], transmission.delta[q]));
      }
      gs.channels.push_back(std::move(ch));
      break;
    }
    case TransmissionKind::NonlinearCoefficient:
      for (int i = 0; i < n; ++i) {
        int gi = transmission.gamma[static_cast<std::size_t>(i)];
        if (gi == 0) continue;
        InterfaceChannel ch;
        ch.lambda.assign(static_cast<std::size_t>(n), 0);
        ch.min_exp.assign(static_cast<std::size_t>(n), 0);
        ch.lambda[static_cast<std::size_t>(i)] = gi;
        double ki = transmission.k_species.empty()
                        ? 1.0
                        : transmission.k_species[static_cast<std::size_t>(i)];
        ch.k = ki / gi;  // channel direction carries the factor gamma_i
        ch.coefficient_form = transmission.coefficient_form;
        gs.channels.push_back(std::move(ch));
      }
      break;
  }
  return gs;
}

std::vector<double> GradientStructure::bulk_rate(std::span<const double> u, Side s,
                                                 const EntropyModel& entropy) const {
  const int n = network.n;
  std::vector<double> dh = entropy.grad(u, s);
  // kappa(u) = k prod ubar^((alpha+beta)/2)
  double kappa = network.rate_constant(s);
  double arg = 0.0;
  for (int i = 0; i < n; ++i) {
    std::size_t q = static_cast<std::size_t>(i);
    double ub = u[q] / network.ref(s, i);
    kappa *= std::pow(ub, 0.5 * (network.alpha[q] + network.beta[q]));
    arg += (network.alpha[q] - network.beta[q]) * (-dh[q]);
  }
  double cprime = cosh_potential(arg).second;
  std::vector<double> rate(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::size_t q = static_cast<std::size_t>(i);
    rate[q] = kappa * cprime * (network.alpha[q] - network.beta[q]);
  }
  return rate;
}

std::vector<double> GradientStructure::interface_rate(std::span<const double> up,
                                                      std::span<const double> um,
                                                      const EntropyModel& entropy) const {
  const int n = network.n;
  std::vector<double> dhp = entropy.grad(up, Side::Plus);
  std::vector<double> dhm = entropy.grad(um, Side::Minus);
  std::vector<double> rate(static_cast<std::size_t>(n), 0.0);
  for (const InterfaceChannel& ch : channels) {
    double kappa = ch.k;
    double arg = 0.0;
    for (int i = 0; i < n; ++i) {
      std::size_t q = static_cast<std::size_t>(i);
      double prod = (up[q] / entropy.ref(Side::Plus, i)) * (um[q] / entropy.ref(Side::Minus, i));
      kappa *= std::pow(prod, 0.5 * std::abs(ch.lambda[q]) + ch.min_exp[q]);
      arg += ch.lambda[q] * (dhp[q] - dhm[q]);
    }
    // Extra coefficient factors act on the channel species (the unique
    // nonzero direction entry for single-species channels).
    if (ch.coefficient_form != "constant") {
      for (int i = 0; i < n; ++i) {
        std::size_t q = static_cast<std::size_t>(i);
        if (ch.lambda[q] == 0) continue;
        double ubp = up[q] / entropy.ref(Side::Plus, i);
        double ubm = um[q] / entropy.ref(Side::Minus, i);
        if (ch.coefficient_form == "geometric_mean") {
          kappa *= std::sqrt(ubp * ubm);
        } else if (ch.coefficient_form == "inverse_sum") {
          kappa /= 1.0 + ubp + ubm;
        }
      }
    }
    double cprime = cosh_potential(arg).second;
    for (int i = 0; i < n; ++i) {
      std::size_t q = static_cast<std::size_t>(i);
      rate[q] += kappa * cprime * ch.lambda[q];
    }
  }
  return rate;
}

DiffusionSpec DiffusionSpec::isotropic(int n_species, double a_plus, double a_minus) {
  DiffusionSpec d;
  d.coeff.resize(static_cast<std::size_t>(n_species));
  for (auto& per_species : d.coeff) {
    per_species[static_cast<int>(Side::Plus)] = {a_plus, a_plus};
    per_species[static_cast<int>(Side::Minus)] = {a_minus, a_minus};
  }
  return d;
}

double DiffusionSpec::ellipticity() const {
  double a = std::numeric_limits<double>::infinity();
  for (const auto& per_species : coeff)
    for (const auto& per_side : per_species)
      for (double v : per_side) a = std::min(a, v);
  return a;
}

}  // namespace crd
