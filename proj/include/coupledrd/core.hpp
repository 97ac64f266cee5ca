#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crd {

using Vec2 = std::array<double, 2>;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a[0], s * a[1]}; }
inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec2 a) { return std::hypot(a[0], a[1]); }

/// 2x2 matrix, row-major.
struct Mat2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  double operator()(int r, int c) const { return m[2 * r + c]; }
  double& operator()(int r, int c) { return m[2 * r + c]; }

  Vec2 apply(Vec2 v) const { return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]}; }
  Vec2 apply_transpose(Vec2 v) const { return {m[0] * v[0] + m[2] * v[1], m[1] * v[0] + m[3] * v[1]}; }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }

  static Mat2 columns(Vec2 c0, Vec2 c1) {
    Mat2 r;
    r.m = {c0[0], c1[0], c0[1], c1[1]};
    return r;
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    r.m = {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
    return r;
  }
};

/// Compartment tag.
enum class Side : int { Plus = 0, Minus = 1 };

inline Side opposite(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }
inline const char* to_string(Side s) { return s == Side::Plus ? "plus" : "minus"; }

/// Invalid input, scenario, or geometry descriptor. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runtime abort of a simulation (time-step underflow, solver breakdown).
/// CLI maps this to exit code 2.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 0^0 := 1 convention for stoichiometric products.
inline double int_pow(double base, int e) {
  if (e == 0) return 1.0;
  double r = 1.0;
  double b = base;
  int k = e < 0 ? -e : e;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return e < 0 ? 1.0 / r : r;
}

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace crd
