#include "coupledrd/entropy.hpp"

#include <cmath>

namespace crd {

double boltzmann(double r, bool shifted) {
  if (r < 0.0) throw std::domain_error("boltzmann: negative argument");
  double v = r == 0.0 ? 0.0 : r * std::log(r) - r;
  return shifted ? v + 1.0 : v;
}

double EntropyModel::h(std::span<const double> u, Side s) const {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double ri = ref(s, i);
    acc += ri * boltzmann(u[static_cast<std::size_t>(i)] / ri, shifted);
  }
  return acc;
}

void EntropyModel::grad(std::span<const double> u, Side s, std::span<double> out) const {
  for (int i = 0; i < n; ++i) {
    double ui = u[static_cast<std::size_t>(i)];
    if (!(ui > 0.0)) throw std::domain_error("entropy_gradient: non-positive density");
    out[static_cast<std::size_t>(i)] = std::log(ui / ref(s, i));
  }
}

std::vector<double> EntropyModel::grad(std::span<const double> u, Side s) const {
  std::vector<double> g(static_cast<std::size_t>(n));
  grad(u, s, g);
  return g;
}

}  // namespace crd
