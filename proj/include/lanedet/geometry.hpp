#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lanedet {

using Vec2 = Eigen::Vector2d;
using GridPoint = Eigen::Vector2i;
using NodeId = int;

inline Vec2 to_real(const GridPoint& g) { return g.cast<double>(); }

// Packs a grid cell into a hashable key.
inline std::uint64_t cell_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}
inline std::uint64_t cell_key(const GridPoint& c) { return cell_key(c.x(), c.y()); }

// Axis-aligned rectangle. An integer cell (x, y) lies inside iff
// x_min <= x < x_max and y_min <= y < y_max, so a region with integral
// bounds holds exactly area() unit cells.
struct RectRegion {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  bool contains(const GridPoint& c) const {
    return c.x() >= x_min && c.x() < x_max && c.y() >= y_min && c.y() < y_max;
  }

  int first_cell_x() const { return static_cast<int>(std::ceil(x_min)); }
  int first_cell_y() const { return static_cast<int>(std::ceil(y_min)); }
  int last_cell_x() const { return static_cast<int>(std::ceil(x_max)) - 1; }
  int last_cell_y() const { return static_cast<int>(std::ceil(y_max)) - 1; }

  long cell_count() const {
    const long nx = last_cell_x() - first_cell_x() + 1;
    const long ny = last_cell_y() - first_cell_y() + 1;
    return nx > 0 && ny > 0 ? nx * ny : 0;
  }

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) {
      throw std::invalid_argument("RectRegion: empty or inverted bounds");
    }
  }
};

// Polyline with cached unit tangents and cumulative arc length.
class LanePath {
 public:
  explicit LanePath(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  std::size_t segment_count() const { return points_.size() - 1; }
  const Vec2& tangent(std::size_t segment) const { return tangents_[segment]; }
  // Arc length accumulated at points_[i].
  double arc_at(std::size_t i) const { return cumulative_[i]; }
  double total_length() const { return cumulative_.back(); }

 private:
  std::vector<Vec2> points_;
  std::vector<Vec2> tangents_;
  std::vector<double> cumulative_;
};

struct PathQuery {
  Vec2 point;    // closest point on the path
  Vec2 tangent;  // unit tangent of the segment holding it
  double arc;    // arc-length position along the path
};

// Closest point on the polyline; exact distance ties resolve to the segment
// visited last, i.e. the one farther along the path.
PathQuery closest_point_on_path(const LanePath& path, const Vec2& b);

}  // namespace lanedet
