#include "coupledrd/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace crd {

double PiecewiseLinear::eval(double t) const {
  if (x.empty()) return 0.0;
  if (t <= x.front()) return y.front() + (t - x.front()) * slope(x.front() + 1e-300);
  if (t >= x.back()) return y.back() + (t - x.back()) * slope(x.back() - 1e-300);
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

double PiecewiseLinear::slope(double t) const {
  if (x.size() < 2) return 0.0;
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin());
  i = std::clamp<std::size_t>(i, 1, x.size() - 1);
  return (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
}

double PiecewiseLinear::kink_distance(double t) const {
  double d = std::numeric_limits<double>::infinity();
  // Interior breakpoints only; the table ends are extrapolated linearly.
  for (std::size_t i = 1; i + 1 < x.size(); ++i) d = std::min(d, std::abs(t - x[i]));
  return d;
}

Vec2 ReflectionMap::to_frame(Vec2 p) const { return frame_.apply_transpose(p - anchor_); }
Vec2 ReflectionMap::from_frame(Vec2 q) const { return anchor_ + frame_.apply(q); }

ReflectionMap ReflectionMap::flat(const Geometry& g, Vec2 anchor, double radius) {
  ReflectionMap m;
  m.kind_ = Kind::FlatMirror;
  m.anchor_ = anchor;
  m.radius_ = radius;
  m.axis_ = g.interface.axis;
  m.offset_ = g.interface.offset;
  m.plus_sign_ = g.plus_sign;
  return m;
}

namespace {

// Local boundary chain of a polygon through an interior point of one of its
// edges, expressed in frame coordinates (y, t) and clipped to |y| <= y_win.
// Fails if the chain is not a graph over y within the window.
PiecewiseLinear boundary_graph(const std::vector<Vec2>& poly, Vec2 anchor, const Mat2& frame,
                               double y_win) {
  const std::size_t n = poly.size();
  auto fc = [&](Vec2 p) { return frame.apply_transpose(p - anchor); };

  // Locate the edge containing the anchor.
  std::size_t e0 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(anchor, poly[i], poly[(i + 1) % n]) <= 1e-9) {
      e0 = i;
      break;
    }
  }
  if (e0 == n) throw ConfigError("reflection_map: anchor does not lie on the compartment boundary");

  // Walk in both directions from the anchor, collecting frame points until y
  // leaves the window.
  auto walk = [&](bool forward) {
    std::vector<Vec2> pts;  // (y, t)
    Vec2 prev = fc(anchor);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t e = forward ? (e0 + step) % n : (e0 + n - step) % n;
      Vec2 target = fc(forward ? poly[(e + 1) % n] : poly[e]);
      if (std::abs(target[0] - prev[0]) < 1e-14) {
        if (std::abs(target[1] - prev[1]) < 1e-14) continue;  // anchor at a vertex
        throw ConfigError("reflection_map: boundary runs parallel to the frame axis; "
                          "choose a smaller radius or different frame tilt");
      }
      if (std::abs(target[0]) >= y_win) {
        // Clip the final edge at the window boundary.
        double yw = target[0] > 0 ? y_win : -y_win;
        double w = (yw - prev[0]) / (target[0] - prev[0]);
        pts.push_back({yw, prev[1] + w * (target[1] - prev[1])});
        return pts;
      }
      pts.push_back(target);
      prev = target;
    }
    throw ConfigError("reflection_map: boundary chain exhausted inside the frame window; "
                      "choose a smaller radius");
  };

  std::vector<Vec2> fwd = walk(true);
  std::vector<Vec2> bwd = walk(false);

  std::vector<Vec2> chain;
  chain.reserve(bwd.size() + fwd.size() + 1);
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) chain.push_back(*it);
  chain.push_back(fc(anchor));
  for (const Vec2& p : fwd) chain.push_back(p);

  if (chain.front()[0] > chain.back()[0]) std::reverse(chain.begin(), chain.end());
  PiecewiseLinear pl;
  for (const Vec2& p : chain) {
    if (!pl.x.empty()) {
      if (p[0] <= pl.x.back() + 1e-14)
        throw ConfigError("reflection_map: no hypograph representation over the common frame "
                          "at the requested radius; choose a smaller radius");
    }
    pl.x.push_back(p[0]);
    pl.y.push_back(p[1]);
  }
  if (pl.x.front() > -y_win + 1e-12 || pl.x.back() < y_win - 1e-12)
    throw ConfigError("reflection_map: boundary chain does not span the frame window");
  return pl;
}

}  // namespace

ReflectionMap ReflectionMap::hypograph(const Geometry& g, Vec2 anchor, double radius,
                                       double frame_tilt) {
  if (frame_tilt <= 0.0 || frame_tilt >= 1.0)
    throw ConfigError("reflection_map: frame tilt must lie in (0,1)");
  ReflectionMap m;
  m.kind_ = Kind::Hypograph;
  m.anchor_ = anchor;
  m.radius_ = radius;
  m.axis_ = g.interface.axis;
  m.offset_ = g.interface.offset;
  m.plus_sign_ = g.plus_sign;

  // Frame axis: along the interface towards its interior, tilted into the
  // plus compartment. The "up" direction is the negative of that axis, and
  // the transverse direction is oriented so the interface side has y < 0.
  const int ax = g.interface.axis;
  double mid = 0.5 * (g.interface.lo + g.interface.hi);
  double dir = mid >= anchor[1 - ax] ? 1.0 : -1.0;
  Vec2 along{};
  along[1 - ax] = dir;
  Vec2 into_plus{};
  into_plus[ax] = g.plus_sign;
  double nrm = std::hypot(1.0, frame_tilt);
  Vec2 axis_vec = (1.0 / nrm) * (along + frame_tilt * into_plus);
  Vec2 e_up = -1.0 * axis_vec;
  Vec2 e_y{-e_up[1], e_up[0]};
  if (dot(along, e_y) > 0.0) e_y = -1.0 * e_y;
  m.frame_ = Mat2::columns(e_y, e_up);

  const double y_win = 1.25 * radius;
  auto mirrored_minus = g.minus.vertices;
  for (Vec2& v : mirrored_minus) v[ax] = 2.0 * g.interface.offset - v[ax];
  m.eta1_ = boundary_graph(mirrored_minus, anchor, m.frame_, y_win);
  m.eta2_ = boundary_graph(g.plus.vertices, anchor, m.frame_, y_win);

  double lip = 0.0;
  for (const PiecewiseLinear* pl : {&m.eta1_, &m.eta2_})
    for (std::size_t i = 1; i < pl->x.size(); ++i)
      lip = std::max(lip, std::abs((pl->y[i] - pl->y[i - 1]) / (pl->x[i] - pl->x[i - 1])));
  m.depth_ = radius * (1.0 + 1.05 * lip);  // tube contains the metric disc

  // The two height functions must agree where the graph lies on the interface.
  for (int k = 0; k <= 64; ++k) {
    double y = -y_win + k * (2.0 * y_win / 64);
    double t2 = m.eta2_.eval(y);
    Vec2 p = m.from_frame({y, t2});
    if (g.on_interface(p, 1e-9) && std::abs(m.eta1_.eval(y) - t2) > 1e-9)
      throw ConfigError("reflection_map: height functions disagree on the interface part of "
                        "the frame; no common frame at the requested radius");
  }
  return m;
}

Vec2 ReflectionMap::apply_signed(Vec2 p, bool minus_side) const {
  if (kind_ == Kind::FlatMirror) {
    Vec2 q = p;
    q[axis_] = 2.0 * offset_ - p[axis_];
    return q;
  }
  if (minus_side) {
    Vec2 r = p;
    r[axis_] = 2.0 * offset_ - p[axis_];  // standard reflection first
    Vec2 f = to_frame(r);
    double s = f[1] - eta1_.eval(f[0]);
    return from_frame({f[0], eta2_.eval(f[0]) + s});
  }
  Vec2 f = to_frame(p);  // inverse: undo the shear, then reflect
  double s = f[1] - eta2_.eval(f[0]);
  Vec2 r = from_frame({f[0], eta1_.eval(f[0]) + s});
  r[axis_] = 2.0 * offset_ - r[axis_];
  return r;
}

bool ReflectionMap::in_neighbourhood(Vec2 p) const {
  if (kind_ == Kind::FlatMirror) return norm(p - anchor_) <= radius_ + 1e-12;
  bool minus_side = (p[axis_] - offset_) * plus_sign_ <= 0.0;
  Vec2 q = p;
  if (minus_side) q[axis_] = 2.0 * offset_ - p[axis_];
  Vec2 f = to_frame(q);
  const PiecewiseLinear& eta = minus_side ? eta1_ : eta2_;
  double s = f[1] - eta.eval(f[0]);
  return std::abs(f[0]) <= radius_ + 1e-12 && std::abs(s) <= depth_ + 1e-12;
}

Vec2 ReflectionMap::apply(Vec2 p) const {
  if (!in_neighbourhood(p))
    throw std::domain_error("apply_reflection: point outside the map neighbourhood");
  bool minus_side = (p[axis_] - offset_) * plus_sign_ <= 0.0;
  return apply_signed(p, minus_side);
}

Mat2 ReflectionMap::jacobian(Vec2 p) const {
  Mat2 mirror;
  mirror(axis_, axis_) = -1.0;
  if (kind_ == Kind::FlatMirror) return mirror;

  bool minus_side = (p[axis_] - offset_) * plus_sign_ <= 0.0;
  auto shear = [&](double dslope) {
    Mat2 s;
    s(1, 0) = dslope;
    return s;
  };
  if (minus_side) {
    Vec2 r = p;
    r[axis_] = 2.0 * offset_ - p[axis_];
    double y = to_frame(r)[0];
    Mat2 sh = shear(eta2_.slope(y) - eta1_.slope(y));
    Mat2 O = frame_;
    Mat2 Ot = Mat2::columns({O(0, 0), O(0, 1)}, {O(1, 0), O(1, 1)});  // transpose
    return O * sh * Ot * mirror;
  }
  double y = to_frame(p)[0];
  Mat2 sh = shear(eta1_.slope(y) - eta2_.slope(y));
  Mat2 O = frame_;
  Mat2 Ot = Mat2::columns({O(0, 0), O(0, 1)}, {O(1, 0), O(1, 1)});
  return mirror * (O * sh * Ot);
}

double ReflectionMap::kink_distance(Vec2 p) const {
  if (kind_ == Kind::FlatMirror) return std::numeric_limits<double>::infinity();
  bool minus_side = (p[axis_] - offset_) * plus_sign_ <= 0.0;
  Vec2 q = p;
  if (minus_side) q[axis_] = 2.0 * offset_ - p[axis_];
  double y = to_frame(q)[0];
  return std::min(eta1_.kink_distance(y), eta2_.kink_distance(y));
}

double ReflectionMap::separating_line_distance(Vec2 p) const {
  return std::abs(p[axis_] - offset_);
}

void ReflectionMap::corrupt_eta1_for_test(double amount) {
  for (std::size_t i = 0; i < eta1_.x.size(); ++i)
    if (eta1_.x[i] < 0.0) eta1_.y[i] += amount * (-eta1_.x[i]);
}

ReflectionMap reflection_map(const Geometry& g, Vec2 anchor, double radius, double frame_tilt) {
  if (g.interface.distance(anchor) > 1e-9)
    throw ConfigError("reflection_map: anchor must lie on the interface");
  if (radius <= 0.0) throw ConfigError("reflection_map: radius must be positive");

  if (g.mirror_symmetric) {
    // The global mirror works wherever the neighbourhood stays clear of
    // interface endpoints at which the boundary continues along the
    // separating line into the outer boundary (junction points).
    bool near_junction = false;
    int ax = g.interface.axis;
    for (Vec2 end : {g.interface.endpoint_lo(), g.interface.endpoint_hi()}) {
      if (norm(end - anchor) >= radius) continue;
      for (const auto& [a, b] : g.outer_boundary(Side::Plus)) {
        if (std::abs(a[ax] - g.interface.offset) <= 1e-12 &&
            std::abs(b[ax] - g.interface.offset) <= 1e-12 &&
            point_segment_distance(end, a, b) <= 1e-9) {
          near_junction = true;
        }
      }
    }
    if (g.template_name == "flat_symmetric" || !near_junction)
      return ReflectionMap::flat(g, anchor, radius);
  }
  return ReflectionMap::hypograph(g, anchor, radius, frame_tilt);
}

Vec2 apply_reflection(const ReflectionMap& map, Vec2 p) { return map.apply(p); }

ReflectionReport verify_reflection(const ReflectionMap& map, const Geometry& g, int n_samples,
                                   double fd_step, std::uint64_t seed) {
  if (n_samples < 100) throw std::domain_error("verify_reflection: need at least 100 samples");
  if (!(fd_step > 0.0 && fd_step < map.radius() / 10.0))
    throw std::domain_error("verify_reflection: fd_step must lie in (0, radius/10)");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ReflectionReport rep;

  Vec2 beta = map.anchor();
  double R = std::min(map.radius(), 4.0);  // sampling window for effectively global maps

  auto sample_domain_point = [&]() -> Vec2 {
    for (int tries = 0; tries < 4096; ++tries) {
      Vec2 p{beta[0] + R * unit(rng), beta[1] + R * unit(rng)};
      if (norm(p - beta) > map.radius()) continue;
      if (g.plus.contains(p) || g.minus.contains(p)) return p;
    }
    throw std::runtime_error("verify_reflection: sampling failed to hit the domain");
  };

  for (int k = 0; k < n_samples; ++k) {
    Vec2 p = sample_domain_point();
    Vec2 q = map.apply(map.apply(p));
    rep.involution_defect = std::max(rep.involution_defect, norm(q - p));

    if (map.kink_distance(p) > 2.0 * fd_step && map.separating_line_distance(p) > 2.0 * fd_step &&
        norm(p - beta) + 2.0 * fd_step < map.radius()) {
      Mat2 J;
      for (int j = 0; j < 2; ++j) {
        Vec2 e{};
        e[j] = fd_step;
        Vec2 fp = map.apply(p + e);
        Vec2 fm = map.apply(p - e);
        J(0, j) = (fp[0] - fm[0]) / (2.0 * fd_step);
        J(1, j) = (fp[1] - fm[1]) / (2.0 * fd_step);
      }
      rep.det_defect = std::max(rep.det_defect, std::abs(std::abs(J.det()) - 1.0));
      ++rep.det_samples;
    }
  }

  // Interface fixed pointwise.
  {
    int ax = g.interface.axis;
    double lo = std::max(g.interface.lo, beta[1 - ax] - map.radius());
    double hi = std::min(g.interface.hi, beta[1 - ax] + map.radius());
    for (int k = 0; k < n_samples; ++k) {
      double u = lo + (hi - lo) * u01(rng);
      Vec2 z;
      z[ax] = g.interface.offset;
      z[1 - ax] = u;
      if (!map.in_neighbourhood(z)) continue;
      rep.interface_fixed_defect = std::max(rep.interface_fixed_defect, norm(map.apply(z) - z));
    }
  }

  // Outer boundary of the minus compartment maps into the outer boundary of
  // the plus compartment.
  {
    auto outer_minus = g.outer_boundary(Side::Minus);
    auto outer_plus = g.outer_boundary(Side::Plus);
    for (const auto& [a, b] : outer_minus) {
      for (int k = 0; k < 64; ++k) {
        Vec2 z = a + (k / 63.0) * (b - a);
        if (norm(z - beta) >= map.radius()) continue;
        Vec2 w = map.apply(z);
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [c, e] : outer_plus) d = std::min(d, point_segment_distance(w, c, e));
        rep.boundary_map_defect = std::max(rep.boundary_map_defect, d);
      }
    }
  }
  return rep;
}

ExtendedField extend_field(const StateField& state, const ReflectionMap& map, const Mesh& mesh) {
  if (state.n_cells() != mesh.n_cells())
    throw std::invalid_argument("extend_field: state does not match the mesh");
  ExtendedField ext;
  ext.n_species = state.n_species;
  ext.values.assign(state.values.size(), 0.0);
  ext.valid.assign(static_cast<std::size_t>(mesh.n_cells()), 0);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 x = mesh.cells[c].center;
    if (!map.in_neighbourhood(x)) continue;
    Vec2 y = map.apply(x);
    int cc = mesh.cell_at(y);
    if (cc < 0)
      throw std::runtime_error("extend_field: reflected cell center falls outside the mesh");
    ext.valid[c] = 1;
    for (int i = 0; i < state.n_species; ++i)
      ext.values[static_cast<std::size_t>(c) * state.n_species + i] = state.at(cc, i);
  }
  return ext;
}

}  // namespace crd
