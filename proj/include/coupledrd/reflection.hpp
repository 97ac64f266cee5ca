#pragma once

#include <cstdint>
#include <vector>

#include "coupledrd/geometry.hpp"
#include "coupledrd/state.hpp"

namespace crd {

/// Continuous piecewise-linear function given by sorted breakpoints.
struct PiecewiseLinear {
  std::vector<double> x;  // strictly increasing
  std::vector<double> y;

  double eval(double t) const;
  double slope(double t) const;  // derivative on the open piece containing t
  double kink_distance(double t) const;
};

/// Measure-preserving involutive map between the two compartments in a
/// neighbourhood of an interface anchor, fixing the interface pointwise.
///
/// Two constructions are provided. For a mirror-symmetric geometry the map is
/// the global reflection across the separating line. Near an interface
/// endpoint the map composes that reflection with a volume-preserving shear
/// between the hypograph representations of the reflected minus compartment
/// (height function eta1) and the plus compartment (eta2) over a common
/// rotated frame; the two height functions agree on the part of the frame
/// whose graph lies on the interface.
class ReflectionMap {
 public:
  enum class Kind { FlatMirror, Hypograph };

  static ReflectionMap flat(const Geometry& g, Vec2 anchor, double radius);
  static ReflectionMap hypograph(const Geometry& g, Vec2 anchor, double radius, double frame_tilt);

  Kind kind() const { return kind_; }
  Vec2 anchor() const { return anchor_; }
  double radius() const { return radius_; }

  /// Membership in the map neighbourhood. For the mirror this is the metric
  /// disc; for the hypograph composition it is the frame tube
  /// {|y| <= radius, |t - eta(y)| <= depth}, which the map leaves invariant
  /// (the shear preserves both frame coordinates). The tube contains the
  /// metric disc of the same radius.
  bool in_neighbourhood(Vec2 p) const;

  /// Applies the involution. The point must lie in the closed neighbourhood.
  Vec2 apply(Vec2 p) const;

  /// Jacobian at differentiability points (away from height-function kinks
  /// and off the separating line).
  Mat2 jacobian(Vec2 p) const;

  /// Distance (in the frame coordinate) from the nearest height-function
  /// kink; infinite for the flat mirror. Used to exclude non-smooth points
  /// from finite-difference sampling.
  double kink_distance(Vec2 p) const;
  double separating_line_distance(Vec2 p) const;

  const PiecewiseLinear& eta1() const { return eta1_; }
  const PiecewiseLinear& eta2() const { return eta2_; }

  /// Test hook: perturb eta1 away from eta2 (breaks the interface fixing).
  void corrupt_eta1_for_test(double amount);

 private:
  ReflectionMap() = default;
  Vec2 to_frame(Vec2 p) const;    // O^T (p - anchor)
  Vec2 from_frame(Vec2 q) const;  // anchor + O q
  Vec2 apply_signed(Vec2 p, bool minus_side) const;

  Kind kind_ = Kind::FlatMirror;
  Vec2 anchor_{0.0, 0.0};
  double radius_ = 0.0;
  double depth_ = 0.0;    // tube half-depth in the graph coordinate
  int axis_ = 0;          // separating line: x[axis] = offset
  double offset_ = 0.0;
  double plus_sign_ = 1.0;
  Mat2 frame_;            // columns: frame y direction, frame up direction
  PiecewiseLinear eta1_, eta2_;
};

/// Builds the reflection map at the given anchor. Uses the global mirror when
/// the geometry is mirror-symmetric and the anchor is away from the interface
/// endpoints that meet the outer boundary; otherwise builds the hypograph
/// composition. frame_tilt controls the frame direction for the hypograph
/// case (0 < tilt < 1; the frame axis runs along the interface, tilted into
/// the compartments by this amount).
ReflectionMap reflection_map(const Geometry& g, Vec2 anchor, double radius, double frame_tilt = 0.5);

Vec2 apply_reflection(const ReflectionMap& map, Vec2 p);

struct ReflectionReport {
  double involution_defect = 0.0;
  double det_defect = 0.0;          // max | |det DPhi| - 1 | by central differences
  double interface_fixed_defect = 0.0;
  double boundary_map_defect = 0.0;  // outer boundary mapped to outer boundary
  int det_samples = 0;
};

/// Samples the map properties. fd_step must lie in (0, radius/10); Jacobians
/// are sampled only at points farther than 2*fd_step from kinks and from the
/// separating line.
ReflectionReport verify_reflection(const ReflectionMap& map, const Geometry& g, int n_samples,
                                   double fd_step, std::uint64_t seed = 12345);

/// Field extended across the interface: values[c] holds the opposite-side
/// densities evaluated at the reflected cell center; valid[c] marks cells
/// whose center lies in the map neighbourhood.
struct ExtendedField {
  int n_species = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::span<const double> cell(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * n_species, static_cast<std::size_t>(n_species)};
  }
};

ExtendedField extend_field(const StateField& state, const ReflectionMap& map, const Mesh& mesh);

}  // namespace crd
