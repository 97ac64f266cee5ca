#pragma once

#include <vector>

#include "coupledrd/geometry.hpp"

namespace crd {

/// Partition of unity subordinate to a finite cover of the interface by
/// anchor neighbourhoods, plus an outer weight supported away from the
/// interface. By construction phi_out + sum_b phi_b == 1 holds exactly:
/// the anchor weights are normalized radial plateau bumps and the outer
/// weight is defined as one minus their sum.
class PartitionOfUnity {
 public:
  struct Anchor {
    Vec2 beta;
    double radius;
  };

  /// Builds the partition; fails with a coverage error (listing uncovered
  /// interface samples) if the anchor neighbourhoods do not cover the
  /// interface.
  static PartitionOfUnity build(const Geometry& g, const std::vector<Vec2>& anchors,
                                const std::vector<double>& radii);

  std::size_t size() const { return anchors_.size(); }
  const Anchor& anchor(std::size_t b) const { return anchors_[b]; }

  double phi(std::size_t b, Vec2 x) const;
  double phi_out(Vec2 x) const;

  /// Raw (unnormalized) bump sum; exposed for tests.
  double bump_sum(Vec2 x) const;
  double threshold() const { return t0_; }

 private:
  double raw_bump(std::size_t b, Vec2 x) const;
  double mollified_sum(double s) const;  // smooth min(s / t0, 1)-style factor

  std::vector<Anchor> anchors_;
  double t0_ = 1.0;
};

}  // namespace crd
