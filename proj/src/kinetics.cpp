#include "coupledrd/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace crd {

void ReactionNetwork::rate(std::span<const double> u, Side s, std::span<double> f) const {
  double fwd = 1.0, bwd = 1.0;
  for (int i = 0; i < n; ++i) {
    double ub = u[static_cast<std::size_t>(i)] / ref(s, i);
    fwd *= int_pow(ub, alpha[static_cast<std::size_t>(i)]);
    bwd *= int_pow(ub, beta[static_cast<std::size_t>(i)]);
  }
  double drive = rate_constant(s) * (fwd - bwd);
  for (int i = 0; i < n; ++i)
    f[static_cast<std::size_t>(i)] =
        -(alpha[static_cast<std::size_t>(i)] - beta[static_cast<std::size_t>(i)]) * drive;
}

std::vector<double> ReactionNetwork::rate(std::span<const double> u, Side s) const {
  std::vector<double> f(static_cast<std::size_t>(n));
  rate(u, s, f);
  return f;
}

const std::vector<std::string>& TransmissionModel::coefficient_registry() {
  static const std::vector<std::string> reg{"constant", "geometric_mean", "inverse_sum"};
  return reg;
}

void TransmissionModel::rate(std::span<const double> up, std::span<const double> um,
                             std::span<double> r) const {
  switch (kind) {
    case TransmissionKind::Linear:
      for (int i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        r[k] = k_species[k] * (up[k] / ref(Side::Plus, i) - um[k] / ref(Side::Minus, i));
      }
      return;
    case TransmissionKind::Polynomial: {
      double fwd = 1.0, bwd = 1.0;
      for (int i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double ubp = up[k] / ref(Side::Plus, i);
        double ubm = um[k] / ref(Side::Minus, i);
        fwd *= int_pow(ubp, gamma[k]) * int_pow(ubm, delta[k]);
        bwd *= int_pow(ubp, delta[k]) * int_pow(ubm, gamma[k]);
      }
      double drive = k_gamma * (fwd - bwd);
      for (int i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        r[k] = (gamma[k] - delta[k]) * drive;
      }
      return;
    }
    case TransmissionKind::NonlinearCoefficient:
      for (int i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double ubp = up[k] / ref(Side::Plus, i);
        double ubm = um[k] / ref(Side::Minus, i);
        double ki = k_species.empty() ? 1.0 : k_species[k];
        if (coefficient_form == "geometric_mean") {
          ki *= std::sqrt(ubp * ubm);
        } else if (coefficient_form == "inverse_sum") {
          ki /= 1.0 + ubp + ubm;
        } else if (coefficient_form != "constant") {
          throw ConfigError("transmission model: unknown coefficient form '" + coefficient_form +
                            "'");
        }
        r[k] = ki * (int_pow(ubp, gamma[k]) - int_pow(ubm, gamma[k]));
      }
      return;
  }
}

std::vector<double> TransmissionModel::rate(std::span<const double> up,
                                            std::span<const double> um) const {
  std::vector<double> r(static_cast<std::size_t>(n));
  rate(up, um, r);
  return r;
}

void RatePack::bulk(Side s, std::span<const double> u, std::span<double> out) const {
  if (f) {
    f(s, u, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

void RatePack::transmission(std::span<const double> up, std::span<const double> um,
                            std::span<double> out) const {
  if (r) {
    r(up, um, out);
  } else {
    std::fill(out.begin(), out.end(), 0.0);
  }
}

RatePack make_rates(const std::optional<ReactionNetwork>& network,
                    const std::optional<TransmissionModel>& transmission, int n) {
  RatePack pack;
  pack.n = n;
  if (network) {
    ReactionNetwork net = *network;
    pack.f = [net](Side s, std::span<const double> u, std::span<double> out) {
      net.rate(u, s, out);
    };
  }
  if (transmission) {
    TransmissionModel tm = *transmission;
    pack.r = [tm](std::span<const double> up, std::span<const double> um, std::span<double> out) {
      tm.rate(up, um, out);
    };
  }
  return pack;
}

namespace {

void damp(std::span<double> v, double eps) {
  if (eps <= 0.0) return;
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  double scale = 1.0 / (1.0 + eps * std::sqrt(norm2));
  for (double& x : v) x *= scale;
}

}  // namespace

void RegularizedModel::f_eps(Side s, std::span<const double> u, std::span<double> out) const {
  base.bulk(s, u, out);
  damp(out, epsilon);
}

void RegularizedModel::r_eps(std::span<const double> up, std::span<const double> um,
                             std::span<double> out) const {
  base.transmission(up, um, out);
  damp(out, epsilon);
}

RegularizedModel regularize(RatePack base, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::domain_error("regularize: epsilon must lie in (0,1]");
  return RegularizedModel{epsilon, std::move(base)};
}

StateField clip_initial_data(const StateField& u0, double epsilon) {
  StateField out = u0;
  if (epsilon <= 0.0) return out;
  double cap = 1.0 / epsilon;
  for (double& v : out.values) v = std::min(v, cap);
  return out;
}

bool HypothesisReport::pass(double tol) const {
  return bulk_dissipation_violation <= tol && interface_dissipation_violation <= tol &&
         mass_preservation_defect == 0.0 && bulk_quasi_positivity_violation <= tol &&
         interface_quasi_positivity_violation <= tol;
}

HypothesisReport validate_hypotheses(const RatePack& rates, const EntropyModel& entropy,
                                     int n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw std::domain_error("validate_hypotheses: need at least 1000 samples");
  const int n = rates.n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log10u(-3.0, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> pick(0, n - 1);

  HypothesisReport rep;
  rep.n_samples = n_samples;
  std::vector<double> up(n), um(n), f(n), r(n), dhp(n), dhm(n);

  auto sample_positive = [&](std::span<double> u) {
    for (double& x : u) x = std::pow(10.0, log10u(rng));
  };

  for (int k = 0; k < n_samples; ++k) {
    sample_positive(up);
    sample_positive(um);

    for (Side s : {Side::Plus, Side::Minus}) {
      std::span<const double> u = s == Side::Plus ? up : um;
      rates.bulk(s, u, f);
      entropy.grad(u, s, dhp);
      double diss = 0.0;
      for (int i = 0; i < n; ++i)
        diss += f[static_cast<std::size_t>(i)] * dhp[static_cast<std::size_t>(i)];
      rep.bulk_dissipation_violation = std::max(rep.bulk_dissipation_violation, diss);
    }

    rates.transmission(up, um, r);
    entropy.grad(up, Side::Plus, dhp);
    entropy.grad(um, Side::Minus, dhm);
    double idiss = 0.0;
    for (int i = 0; i < n; ++i) {
      std::size_t q = static_cast<std::size_t>(i);
      // r^+ = r, r^- = -r
      idiss += r[q] * dhp[q] + (-r[q]) * dhm[q];
      rep.mass_preservation_defect =
          std::max(rep.mass_preservation_defect, std::abs(r[q] + (-r[q])));
    }
    rep.interface_dissipation_violation = std::max(rep.interface_dissipation_violation, -idiss);
  }

  // Quasi-positivity on boundary faces of the positive cone.
  for (int k = 0; k < n_samples; ++k) {
    sample_positive(up);
    sample_positive(um);
    int iz = pick(rng);
    std::size_t q = static_cast<std::size_t>(iz);
    if (coin(rng)) {
      up[q] = 0.0;
      rates.bulk(Side::Plus, up, f);
      rep.bulk_quasi_positivity_violation = std::max(rep.bulk_quasi_positivity_violation, -f[q]);
      rates.transmission(up, um, r);
      rep.interface_quasi_positivity_violation =
          std::max(rep.interface_quasi_positivity_violation, r[q]);  // r_i^+ <= 0 required
    } else {
      um[q] = 0.0;
      rates.bulk(Side::Minus, um, f);
      rep.bulk_quasi_positivity_violation = std::max(rep.bulk_quasi_positivity_violation, -f[q]);
      rates.transmission(up, um, r);
      rep.interface_quasi_positivity_violation =
          std::max(rep.interface_quasi_positivity_violation, -r[q]);  // r_i^- = -r_i <= 0
    }
  }
  return rep;
}

namespace {

std::vector<int> int_vec(const nlohmann::json& j) {
  std::vector<int> v;
  for (const auto& e : j) v.push_back(e.get<int>());
  return v;
}

std::vector<double> dbl_vec(const nlohmann::json& j) {
  std::vector<double> v;
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

}  // namespace

ReactionNetwork reaction_from_json(const nlohmann::json& j) {
  ReactionNetwork net;
  net.n = j.at("n_species").get<int>();
  net.alpha = int_vec(j.at("alpha"));
  net.beta = int_vec(j.at("beta"));
  net.k_plus = j.value("k_plus", 0.0);
  net.k_minus = j.value("k_minus", 0.0);
  if (j.contains("u_ref_plus")) net.ref_plus = dbl_vec(j.at("u_ref_plus"));
  if (j.contains("u_ref_minus")) net.ref_minus = dbl_vec(j.at("u_ref_minus"));
  if (static_cast<int>(net.alpha.size()) != net.n || static_cast<int>(net.beta.size()) != net.n)
    throw ConfigError("model: alpha/beta length must equal n_species");
  for (int s : net.alpha)
    if (s < 0) throw ConfigError("model: stoichiometry must be non-negative");
  for (int s : net.beta)
    if (s < 0) throw ConfigError("model: stoichiometry must be non-negative");
  return net;
}

std::optional<TransmissionModel> transmission_from_json(const nlohmann::json& j) {
  std::string variant = j.value("transmission_variant", std::string("none"));
  if (variant == "none") return std::nullopt;
  TransmissionModel tm;
  tm.n = j.at("n_species").get<int>();
  if (j.contains("u_ref_plus")) tm.ref_plus = dbl_vec(j.at("u_ref_plus"));
  if (j.contains("u_ref_minus")) tm.ref_minus = dbl_vec(j.at("u_ref_minus"));
  if (variant == "linear") {
    tm.kind = TransmissionKind::Linear;
    tm.k_species = dbl_vec(j.at("k_i"));
    if (static_cast<int>(tm.k_species.size()) != tm.n)
      throw ConfigError("model: k_i length must equal n_species");
    for (double k : tm.k_species)
      if (k <= 0.0) throw ConfigError("model: linear transmission needs k_i > 0");
  } else if (variant == "polynomial") {
    tm.kind = TransmissionKind::Polynomial;
    tm.gamma = int_vec(j.at("gamma"));
    tm.delta = int_vec(j.at("delta"));
    tm.k_gamma = j.at("k_gamma").get<double>();
    if (tm.k_gamma < 0.0) throw ConfigError("model: k_gamma must be non-negative");
  } else if (variant == "nonlinear_coefficient") {
    tm.kind = TransmissionKind::NonlinearCoefficient;
    tm.gamma = int_vec(j.at("gamma"));
    if (j.contains("k_i")) tm.k_species = dbl_vec(j.at("k_i"));
    tm.coefficient_form = j.value("coefficient_form", std::string("constant"));
    const auto& reg = TransmissionModel::coefficient_registry();
    if (std::find(reg.begin(), reg.end(), tm.coefficient_form) == reg.end())
      throw ConfigError("model: unregistered coefficient form '" + tm.coefficient_form + "'");
  } else {
    throw ConfigError("model: unknown transmission_variant '" + variant + "'");
  }
  if (!tm.gamma.empty() && static_cast<int>(tm.gamma.size()) != tm.n)
    throw ConfigError("model: gamma length must equal n_species");
  if (!tm.delta.empty() && static_cast<int>(tm.delta.size()) != tm.n)
    throw ConfigError("model: delta length must equal n_species");
  return tm;
}

}  // namespace crd
