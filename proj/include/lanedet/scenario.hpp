#pragma once

#include "lanedet/simulation.hpp"

#include <string>

namespace lanedet {

enum class ScenarioKind { Straight, Sinusoidal, Parallel };

ScenarioKind parse_scenario_kind(const std::string& s);
std::string to_string(ScenarioKind kind);

// Geometry of the benchmark scenes: a square crowd region [0, region]^2,
// lane spawn regions stacked against its north edge, and paths running
// south through the crowd to y = 0. Spawn heights are chosen so the lane
// walkers together match the crowd walker count at equal density.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Straight;
  double region = 100.0;      // crowd square side
  double width = 10.0;        // lane width
  double amplitude = 10.0;    // sinusoidal: horizontal amplitude
  double wavelength = 100.0;  // sinusoidal: period along the southward axis
  double separation = 20.0;   // parallel: distance between the lane centers

  void validate() const;
};

// Builds the concrete regions and paths; throws when the lane geometry
// would leave [0, region] horizontally.
Scenario build_scenario(const ScenarioSpec& spec);

}  // namespace lanedet
