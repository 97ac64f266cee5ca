#include "coupledrd/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coupledrd/profiles.hpp"

namespace crd {

double PartitionOfUnity::raw_bump(std::size_t b, Vec2 x) const {
  const Anchor& a = anchors_[b];
  return plateau_bump(norm(x - a.beta) / a.radius);
}

double PartitionOfUnity::bump_sum(Vec2 x) const {
  double s = 0.0;
  for (std::size_t b = 0; b < anchors_.size(); ++b) s += raw_bump(b, x);
  return s;
}

double PartitionOfUnity::mollified_sum(double s) const { return smoothstep(s / t0_); }

double PartitionOfUnity::phi(std::size_t b, Vec2 x) const {
  double s = bump_sum(x);
  if (s <= 0.0) return 0.0;
  return raw_bump(b, x) * (mollified_sum(s) / s);
}

double PartitionOfUnity::phi_out(Vec2 x) const { return 1.0 - mollified_sum(bump_sum(x)); }

PartitionOfUnity PartitionOfUnity::build(const Geometry& g, const std::vector<Vec2>& anchors,
                                         const std::vector<double>& radii) {
  if (anchors.empty()) throw ConfigError("partition_of_unity: no anchors");
  if (anchors.size() != radii.size())
    throw ConfigError("partition_of_unity: anchors and radii sizes differ");
  PartitionOfUnity pou;
  for (std::size_t b = 0; b < anchors.size(); ++b) {
    if (g.interface.distance(anchors[b]) > 1e-9)
      throw ConfigError("partition_of_unity: anchor off the interface");
    if (radii[b] <= 0.0) throw ConfigError("partition_of_unity: non-positive radius");
    pou.anchors_.push_back({anchors[b], radii[b]});
  }

  // Coverage: the bump sum must be bounded away from zero on the interface.
  const int n_probe = 10000;
  double min_sum = 1e300;
  std::vector<Vec2> uncovered;
  for (int k = 0; k <= n_probe; ++k) {
    Vec2 z = g.interface.point(static_cast<double>(k) / n_probe);
    double s = pou.bump_sum(z);
    min_sum = std::min(min_sum, s);
    if (s <= 1e-9 && uncovered.size() < 8) uncovered.push_back(z);
  }
  if (!uncovered.empty()) {
    std::ostringstream msg;
    msg << "partition_of_unity: anchors fail to cover the interface; uncovered samples:";
    for (Vec2 z : uncovered) msg << " (" << z[0] << "," << z[1] << ")";
    throw ConfigError(msg.str());
  }
  pou.t0_ = 0.9 * min_sum;
  return pou;
}

}  // namespace crd
