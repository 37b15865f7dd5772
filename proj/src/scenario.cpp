#include "lanedet/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace lanedet {

ScenarioKind parse_scenario_kind(const std::string& s) {
  if (s == "straight") return ScenarioKind::Straight;
  if (s == "sinusoidal") return ScenarioKind::Sinusoidal;
  if (s == "parallel") return ScenarioKind::Parallel;
  throw std::invalid_argument("scenario must be straight, sinusoidal or parallel, got '" + s +
                              "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Straight: return "straight";
    case ScenarioKind::Sinusoidal: return "sinusoidal";
    case ScenarioKind::Parallel: return "parallel";
  }
  throw std::logic_error("unreachable");
}

void ScenarioSpec::validate() const {
  if (!(region > 0.0)) throw std::invalid_argument("ScenarioSpec: region must be > 0");
  if (!(width > 0.0)) throw std::invalid_argument("ScenarioSpec: width must be > 0");
  if (amplitude < 0.0) throw std::invalid_argument("ScenarioSpec: negative amplitude");
  if (!(wavelength > 0.0)) throw std::invalid_argument("ScenarioSpec: wavelength must be > 0");
  if (separation < 0.0) throw std::invalid_argument("ScenarioSpec: negative separation");
}

namespace {

void check_horizontal(double lo, double hi, double region) {
  if (lo < 0.0 || hi > region) {
    throw std::runtime_error("build_scenario: lane geometry leaves [0, " +
                             std::to_string(region) + "] horizontally");
  }
}

LaneSpec straight_lane(double center, double width, double region, double spawn_height) {
  LaneSpec lane{
      RectRegion{center - width / 2.0, center + width / 2.0, region, region + spawn_height},
      LanePath({Vec2(center, region + spawn_height), Vec2(center, 0.0)}), width};
  return lane;
}

}  // namespace

Scenario build_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const double r = spec.region;
  const double center = r / 2.0;
  Scenario scenario;
  scenario.crowd = RectRegion{0.0, r, 0.0, r};

  switch (spec.kind) {
    case ScenarioKind::Straight: {
      check_horizontal(center - spec.width / 2.0, center + spec.width / 2.0, r);
      const double h = r * r / spec.width;  // one lane carries the full crowd count
      scenario.lanes.push_back(straight_lane(center, spec.width, r, h));
      break;
    }
    case ScenarioKind::Sinusoidal: {
      if (spec.amplitude == 0.0) {  // degenerate sinusoid is exactly the straight scene
        return build_scenario(
            ScenarioSpec{ScenarioKind::Straight, r, spec.width, 0.0, spec.wavelength, 0.0});
      }
      check_horizontal(center - spec.amplitude - spec.width / 2.0,
                       center + spec.amplitude + spec.width / 2.0, r);
      const double h = r * r / spec.width;
      const double y_top = r + h;
      // Polyline sampled once per unit of southward progress s, with
      // x(s) = center + A sin(2 pi s / wavelength); phase zero at the top.
      std::vector<Vec2> pts;
      pts.reserve(static_cast<std::size_t>(y_top) + 2);
      double s = 0.0;
      for (; s < y_top; s += 1.0) {
        pts.emplace_back(center + spec.amplitude * std::sin(2.0 * M_PI * s / spec.wavelength),
                         y_top - s);
      }
      pts.emplace_back(
          center + spec.amplitude * std::sin(2.0 * M_PI * y_top / spec.wavelength), 0.0);
      LaneSpec lane{RectRegion{center - spec.width / 2.0, center + spec.width / 2.0, r, y_top},
                    LanePath(std::move(pts)), spec.width};
      scenario.lanes.push_back(std::move(lane));
      break;
    }
    case ScenarioKind::Parallel: {
      const double left = center - spec.separation / 2.0;
      const double right = center + spec.separation / 2.0;
      check_horizontal(left - spec.width / 2.0, right + spec.width / 2.0, r);
      const double h = r * r / (2.0 * spec.width);  // two lanes share the spawn budget
      scenario.lanes.push_back(straight_lane(left, spec.width, r, h));
      scenario.lanes.push_back(straight_lane(right, spec.width, r, h));
      break;
    }
  }
  return scenario;
}

}  // namespace lanedet
