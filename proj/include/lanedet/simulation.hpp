#pragma once

#include "lanedet/geometry.hpp"
#include "lanedet/rng.hpp"
#include "lanedet/trace.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace lanedet {

enum class WalkerKind : std::uint8_t { Random, Lane };

struct WalkerState {
  NodeId id = 0;
  WalkerKind kind = WalkerKind::Random;
  int lane = -1;  // lane index when kind == Lane
  GridPoint pos{0, 0};
  bool active = true;
};

// Model parameters. p is the probability that a random walker takes a step
// (it stays put with probability 1 - p); q is the probability that a lane
// walker follows its path instead of acting like a random walker.
struct SimParams {
  double p = 0.2;
  double q = 0.5;
  double density = 0.3;  // walkers per unit cell, in (0, 1]
  int max_timesteps = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct LaneSpec {
  RectRegion spawn;
  LanePath path;
  double width = 10.0;

  // Walkers farther than this from the path take a corrective step back.
  double half_width() const { return width / 2.0; }
};

struct Scenario {
  RectRegion crowd;
  std::vector<LaneSpec> lanes;

  void validate() const;
};

// Quantizes a real direction onto the grid: a horizontal unit step with
// probability |dx| / (|dx| + |dy|), else a vertical one, each taking the
// sign of its component. The expected displacement stays parallel to
// `direction`. Throws on a zero vector.
GridPoint grid_quantize_step(const Vec2& direction, Rng& rng);

// Intended next cell for a crowd walker: outside the region it steps one
// cell back toward it (along the axis of larger violation, coin flip on a
// tie); inside, it stays with probability 1 - p, else picks one of the four
// cardinal neighbors uniformly.
GridPoint random_walker_intent(const WalkerState& w, const RectRegion& region,
                               const SimParams& params, Rng& rng);

// Intended next cell for a lane walker. With probability q it follows the
// path: a corrective step toward the closest path point when it has
// strayed beyond half_width, a quantized tangent step otherwise. With
// probability 1 - q it behaves like an in-region random walker (lane
// walkers are never clamped to the crowd region).
GridPoint lane_walker_intent(const WalkerState& w, const LanePath& path, double half_width,
                             const SimParams& params, Rng& rng);

// Places all walkers on free integer cells of their spawn regions, crowd
// group first, then lanes in order; ids follow placement order. Cells are
// drawn without replacement; a group whose rounded count exceeds the free
// cells of its region is a configuration error.
std::vector<WalkerState> spawn_walkers(const Scenario& scenario, const SimParams& params,
                                       Rng& rng);

struct MoveOutcome {
  bool moved = false;            // mover reached its target cell
  std::optional<NodeId> pushed;  // occupant displaced to make room
};

// World state, one walker per cell. Each timestep visits the active
// walkers in a fresh random permutation and resolves their moves
// sequentially; a blocked mover may push the occupant into a free cell
// adjacent to it (never back where the mover came from). A walker already
// pushed this timestep cannot be pushed again, so pushes never cascade.
class Simulation {
 public:
  Simulation(Scenario scenario, const SimParams& params, Rng& rng);

  void step(Rng& rng);

  // Moves `mover` toward `target` (a cardinal neighbor of its cell),
  // pushing the occupant aside if needed; fails when the occupant has
  // nowhere to go or was pushed already.
  MoveOutcome resolve_move(NodeId mover, const GridPoint& target, Rng& rng);

  int timestep() const { return t_; }
  const std::vector<WalkerState>& walkers() const { return walkers_; }
  const Scenario& scenario() const { return scenario_; }
  bool lane_walker_active() const;
  std::optional<NodeId> occupant_at(const GridPoint& cell) const;

 private:
  void move_walker(WalkerState& w, const GridPoint& to);
  void deactivate(WalkerState& w);

  Scenario scenario_;
  SimParams params_;
  std::vector<WalkerState> walkers_;
  std::unordered_map<std::uint64_t, NodeId> occupancy_;
  std::vector<std::uint8_t> pushed_this_step_;
  std::vector<NodeId> order_;
  int t_ = 0;
};

// Runs the model to completion: records the spawn frame at t = 0, then
// steps until max_timesteps or until no lane walker remains active,
// whichever comes first. All randomness derives from params.seed.
SimTrace run_simulation(const Scenario& scenario, const SimParams& params);

}  // namespace lanedet
