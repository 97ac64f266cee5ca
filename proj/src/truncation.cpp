#include "coupledrd/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "coupledrd/profiles.hpp"

namespace crd {

double ProjectionTruncation::value(int j, std::span<const double> u) const {
  if (j < 0 || j >= dim) throw std::out_of_range("projection truncation: index out of range");
  double g = sum(u) / E - 1.0;
  // Exact on both plateaus (the cutoff is exactly 1 resp. 0 there); the
  // general expression would leave rounding residue of order eps * E.
  if (g <= 0.0) return u[static_cast<std::size_t>(j)];
  if (g >= 1.0) return 3.0 * E;
  return (u[static_cast<std::size_t>(j)] - 3.0 * E) * Cutoff::value(g) + 3.0 * E;
}

void ProjectionTruncation::gradient(int j, std::span<const double> u, std::span<double> out) const {
  if (j < 0 || j >= dim) throw std::out_of_range("projection truncation: index out of range");
  double g = sum(u) / E - 1.0;
  double w = Cutoff::value(g);
  double w1 = Cutoff::d1(g) / E;
  double uj = u[static_cast<std::size_t>(j)] - 3.0 * E;
  for (int i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = uj * w1;
  out[static_cast<std::size_t>(j)] += w;
}

void ProjectionTruncation::hessian(int j, std::span<const double> u, std::span<double> out) const {
  if (j < 0 || j >= dim) throw std::out_of_range("projection truncation: index out of range");
  double g = sum(u) / E - 1.0;
  double w1 = Cutoff::d1(g) / E;
  double w2 = Cutoff::d2(g) / (E * E);
  double uj = u[static_cast<std::size_t>(j)] - 3.0 * E;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      double v = uj * w2;
      if (i == j) v += w1;
      if (k == j) v += w1;
      out[static_cast<std::size_t>(i) * dim + k] = v;
    }
}

bool VPropertyReport::pass(double growth_factor) const {
  if (projection_error > 0.0 || plateau_error > 0.0 || small_image_error > 0.0) return false;
  auto bounded_growth = [&](const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    return lo <= 0.0 ? hi <= 0.0 : hi / lo < growth_factor;
  };
  if (!bounded_growth(sup_gradient) || !bounded_growth(sup_scaled_hessian)) return false;
  for (std::size_t k = 1; k < E_sequence.size(); ++k) {
    if (gradient_limit_defect[k] > gradient_limit_defect[k - 1] + 1e-15) return false;
    if (hessian_sup[k] > hessian_sup[k - 1] + 1e-15) return false;
  }
  return true;
}

VPropertyReport verify_V_properties(int dim, const std::vector<double>& E_sequence,
                                    int sample_budget, std::uint64_t seed) {
  if (E_sequence.size() < 3) throw std::domain_error("verify_V_properties: need at least 3 levels");
  for (std::size_t k = 1; k < E_sequence.size(); ++k)
    if (E_sequence[k] <= E_sequence[k - 1])
      throw std::domain_error("verify_V_properties: E sequence must increase");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  VPropertyReport rep;
  rep.E_sequence = E_sequence;

  std::vector<double> u(static_cast<std::size_t>(dim));
  std::vector<double> grad(static_cast<std::size_t>(dim));
  std::vector<double> hess(static_cast<std::size_t>(dim) * dim);

  // Fixed sample set for the limit properties, bounded total mass K.
  const double K = 0.9 * E_sequence.front();
  std::vector<std::vector<double>> fixed;
  for (int s = 0; s < 32; ++s) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = K * u01(rng) / dim;
    fixed.push_back(std::move(v));
  }

  for (double E : E_sequence) {
    ProjectionTruncation xi{E, dim};
    double sup_grad = 0.0, sup_hess = 0.0;
    for (int s = 0; s < sample_budget; ++s) {
      // Concentrate samples around the transition band [E, 2E].
      double mass = 3.0 * E * u01(rng);
      for (double& x : u) x = u01(rng);
      double m = sum(u);
      for (double& x : u) x *= mass / m;

      for (int j = 0; j < dim; ++j) {
        double val = xi.value(j, u);
        std::size_t q = static_cast<std::size_t>(j);
        if (sum(u) <= E)
          rep.projection_error = std::max(rep.projection_error, std::abs(val - u[q]));
        if (sum(u) >= 2.0 * E)
          rep.plateau_error = std::max(rep.plateau_error, std::abs(val - 3.0 * E));

        xi.gradient(j, u, grad);
        for (double g : grad) sup_grad = std::max(sup_grad, std::abs(g));
        xi.hessian(j, u, hess);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            sup_hess = std::max(sup_hess,
                                std::sqrt(u[static_cast<std::size_t>(a)]) *
                                    std::sqrt(u[static_cast<std::size_t>(b)]) *
                                    std::abs(hess[static_cast<std::size_t>(a) * dim + b]));
      }

      // Small truncated image forces the identity: if sum_j xi_j <= E then
      // xi_i(u) = u_i for every i.
      double img = 0.0;
      for (int j = 0; j < dim; ++j) img += xi.value(j, u);
      if (img <= E)
        for (int i = 0; i < dim; ++i)
          rep.small_image_error = std::max(
              rep.small_image_error, std::abs(xi.value(i, u) - u[static_cast<std::size_t>(i)]));
    }
    rep.sup_gradient.push_back(sup_grad);
    rep.sup_scaled_hessian.push_back(sup_hess);

    double limit_defect = 0.0, hsup = 0.0;
    for (const auto& v : fixed) {
      for (int j = 0; j < dim; ++j) {
        xi.gradient(j, v, grad);
        for (int i = 0; i < dim; ++i) {
          double target = i == j ? 1.0 : 0.0;
          limit_defect =
              std::max(limit_defect, std::abs(grad[static_cast<std::size_t>(i)] - target));
        }
        xi.hessian(j, v, hess);
        for (double hh : hess) hsup = std::max(hsup, std::abs(hh));
      }
    }
    rep.gradient_limit_defect.push_back(limit_defect);
    rep.hessian_sup.push_back(hsup);
  }
  return rep;
}

}  // namespace crd
