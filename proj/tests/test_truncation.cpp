#include "doctest.h"

#include <cmath>
#include <random>

#include "coupledrd/truncation.hpp"
#include "coupledrd/verification.hpp"

using namespace crd;

TEST_CASE("projection truncation exact regions") {
  ProjectionTruncation xi{4.0, 4};
  std::vector<double> small{0.5, 1.0, 0.25, 0.25};  // sum 2 <= E
  std::vector<double> g(4), h(16);
  for (int j = 0; j < 4; ++j) {
    CHECK(xi.value(j, small) == small[j]);
    xi.gradient(j, small, g);
    for (int i = 0; i < 4; ++i) CHECK(g[i] == (i == j ? 1.0 : 0.0));
    xi.hessian(j, small, h);
    for (double v : h) CHECK(v == 0.0);
  }
  std::vector<double> large{4.0, 2.0, 1.0, 1.5};  // sum 8.5 >= 2E
  for (int j = 0; j < 4; ++j) {
    CHECK(xi.value(j, large) == 3.0 * 4.0);
    xi.gradient(j, large, g);
    for (double v : g) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(xi.value(4, small), std::out_of_range);
}

TEST_CASE("projection truncation derivatives match finite differences") {
  ProjectionTruncation xi{4.0, 4};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double step = 1e-6;
  std::vector<double> g(4), h(16);
  for (int k = 0; k < 100; ++k) {
    // Samples inside the transition band sum in (E, 2E).
    std::vector<double> u(4);
    for (double& x : u) x = u01(rng) + 0.05;
    double target = 4.0 * (1.0 + u01(rng));
    double m = sum(u);
    for (double& x : u) x *= target / m;

    for (int j = 0; j < 4; ++j) {
      xi.gradient(j, u, g);
      xi.hessian(j, u, h);
      for (int i = 0; i < 4; ++i) {
        auto up = u, um = u;
        up[i] += step;
        um[i] -= step;
        double fd = (xi.value(j, up) - xi.value(j, um)) / (2 * step);
        CHECK(std::abs(g[i] - fd) <= 1e-6);
        for (int l = 0; l < 4; ++l) {
          std::vector<double> gp(4), gm(4);
          xi.gradient(j, up, gp);
          xi.gradient(j, um, gm);
          double fdh = (gp[l] - gm[l]) / (2 * step);
          CHECK(std::abs(h[static_cast<std::size_t>(i) * 4 + l] - fdh) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("V property battery") {
  VPropertyReport rep = verify_V_properties(4, {4.0, 16.0, 64.0}, 2000, 7);
  CHECK(rep.projection_error == 0.0);
  CHECK(rep.plateau_error == 0.0);
  CHECK(rep.small_image_error == 0.0);
  CHECK(rep.pass(1.5));
  // Monotone approach of the gradient to the projection along E.
  CHECK(rep.gradient_limit_defect[2] <= rep.gradient_limit_defect[1]);
  CHECK(rep.gradient_limit_defect[1] <= rep.gradient_limit_defect[0]);
  CHECK(rep.hessian_sup[2] <= rep.hessian_sup[1]);
  // Preconditions.
  CHECK_THROWS_AS(verify_V_properties(4, {4.0, 16.0}, 100, 7), std::domain_error);
  CHECK_THROWS_AS(verify_V_properties(4, {16.0, 4.0, 64.0}, 100, 7), std::domain_error);
}

TEST_CASE("truncation gradient decay scaling in N") {
  std::vector<double> decay;
  for (double N : {2.0, 4.0, 8.0}) {
    RelEntropyTruncation tr{16.0, N};
    decay.push_back(measure_xi_star_decay(tr, 4, 20000, 11));
  }
  for (std::size_t k = 1; k < decay.size(); ++k) {
    double ratio = decay[k - 1] / decay[k];
    CHECK(ratio >= 1.0);
    CHECK(ratio <= 4.0);  // halving within a factor of two
  }
}
