#include "lanedet/geometry.hpp"

#include <algorithm>
#include <limits>

namespace lanedet {

LanePath::LanePath(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("LanePath: need at least two points");
  }
  tangents_.reserve(points_.size() - 1);
  cumulative_.reserve(points_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const Vec2 d = points_[i] - points_[i - 1];
    const double len = d.norm();
    if (!(len > 0.0)) {
      throw std::invalid_argument("LanePath: consecutive points must be distinct");
    }
    tangents_.push_back(d / len);
    cumulative_.push_back(cumulative_.back() + len);
  }
}

PathQuery closest_point_on_path(const LanePath& path, const Vec2& b) {
  const auto& pts = path.points();
  PathQuery best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    const Vec2& p0 = pts[seg];
    const Vec2 d = pts[seg + 1] - p0;
    const double t = std::clamp((b - p0).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const Vec2 a = p0 + t * d;
    const double d2 = (b - a).squaredNorm();
    // '<=' so an exact tie prefers the later segment.
    if (d2 <= best_d2) {
      best_d2 = d2;
      const double seg_len = path.arc_at(seg + 1) - path.arc_at(seg);
      best = PathQuery{a, path.tangent(seg), path.arc_at(seg) + t * seg_len};
    }
  }
  return best;
}

}  // namespace lanedet
