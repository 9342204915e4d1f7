#include "influence/env/geometry.hpp"

#include <algorithm>
#include <limits>

namespace influence::geometry {

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 u{std::cos(heading), std::sin(heading)};
  const Vec2 v{-u.y, u.x};
  const Vec2 hl = (0.5 * length) * u;
  const Vec2 hw = (0.5 * width) * v;
  return {center + hl + hw, center + hl - hw, center - hl - hw, center - hl + hw};
}

namespace {

void project(const std::array<Vec2, 4>& pts, Vec2 axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const auto& p : pts) {
    double d = dot(p, axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

}  // namespace

bool overlaps(const OrientedBox& a, const OrientedBox& b) {
  if (norm(a.center - b.center) > a.bounding_radius() + b.bounding_radius()) return false;
  const auto ca = a.corners();
  const auto cb = b.corners();
  const Vec2 axes[4] = {{std::cos(a.heading), std::sin(a.heading)},
                        {-std::sin(a.heading), std::cos(a.heading)},
                        {std::cos(b.heading), std::sin(b.heading)},
                        {-std::sin(b.heading), std::cos(b.heading)}};
  for (const auto& axis : axes) {
    double alo, ahi, blo, bhi;
    project(ca, axis, alo, ahi);
    project(cb, axis, blo, bhi);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

}  // namespace influence::geometry
