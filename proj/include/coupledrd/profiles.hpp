#pragma once

#include <cmath>

namespace crd {

// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 on [0,1], clamped outside.
// C^2 with vanishing first and second derivatives at both endpoints.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

inline double smoothstep_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

inline double smoothstep_d2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

/// Monotone C^2 cutoff: 1 on (-inf,0], 0 on [1,inf), strictly decreasing on (0,1).
/// Used as the eta profile of the relative-entropy truncations and as the
/// omega profile of the projection truncation family.
struct Cutoff {
  static double value(double s) { return 1.0 - smoothstep(s); }
  static double d1(double s) { return -smoothstep_d1(s); }
  static double d2(double s) { return -smoothstep_d2(s); }
};

/// Radial C^2 plateau bump: 1 on [0, 1/2], cutoff profile on [1/2, 1], 0 beyond.
/// Argument is the normalized radius |x - center| / radius.
inline double plateau_bump(double q) {
  if (q <= 0.5) return 1.0;
  return Cutoff::value(2.0 * q - 1.0);
}

inline double plateau_bump_d1(double q) {
  if (q <= 0.5) return 0.0;
  return 2.0 * Cutoff::d1(2.0 * q - 1.0);
}

/// C^2 plateau over an interval: 0 outside [a,d], 1 on [b,c], smooth ramps on
/// [a,b] and [c,d]. Requires a <= b <= c <= d (ramps may be degenerate only if
/// the corresponding endpoints coincide with the support of the data).
struct IntervalPlateau {
  double a, b, c, d;

  double value(double x) const {
    if (x <= a || x >= d) return 0.0;
    if (x < b) return smoothstep((x - a) / (b - a));
    if (x <= c) return 1.0;
    return smoothstep((d - x) / (d - c));
  }
  double d1(double x) const {
    if (x <= a || x >= d) return 0.0;
    if (x < b) return smoothstep_d1((x - a) / (b - a)) / (b - a);
    if (x <= c) return 0.0;
    return -smoothstep_d1((d - x) / (d - c)) / (d - c);
  }
};

}  // namespace crd
