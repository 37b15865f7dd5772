#include "lanedet/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace lanedet {

namespace {

// Fixed neighbor order: north, east, south, west.
const GridPoint kCardinal[4] = {GridPoint(0, 1), GridPoint(1, 0), GridPoint(0, -1),
                                GridPoint(-1, 0)};

GridPoint step_back_intent(const GridPoint& pos, const RectRegion& region, Rng& rng) {
  const int lo_x = region.first_cell_x(), hi_x = region.last_cell_x();
  const int lo_y = region.first_cell_y(), hi_y = region.last_cell_y();
  const int vx = pos.x() < lo_x ? lo_x - pos.x() : (pos.x() > hi_x ? pos.x() - hi_x : 0);
  const int vy = pos.y() < lo_y ? lo_y - pos.y() : (pos.y() > hi_y ? pos.y() - hi_y : 0);
  const int dx = pos.x() < lo_x ? 1 : -1;
  const int dy = pos.y() < lo_y ? 1 : -1;
  const bool horizontal = vx > vy || (vx == vy && rng.bernoulli(0.5));
  return horizontal ? GridPoint(pos.x() + dx, pos.y()) : GridPoint(pos.x(), pos.y() + dy);
}

}  // namespace

void SimParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SimParams: p outside [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("SimParams: q outside [0, 1]");
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("SimParams: density outside (0, 1]");
  }
  if (max_timesteps < 0) throw std::invalid_argument("SimParams: negative max_timesteps");
}

void Scenario::validate() const {
  crowd.validate();
  for (const LaneSpec& lane : lanes) {
    lane.spawn.validate();
    if (!(lane.width > 0.0)) throw std::invalid_argument("Scenario: lane width must be > 0");
  }
}

GridPoint grid_quantize_step(const Vec2& direction, Rng& rng) {
  const double ax = std::abs(direction.x());
  const double ay = std::abs(direction.y());
  if (!(ax + ay > 0.0)) {
    throw std::invalid_argument("grid_quantize_step: zero direction");
  }
  if (rng.uniform() * (ax + ay) < ax) {
    return GridPoint(direction.x() > 0.0 ? 1 : -1, 0);
  }
  return GridPoint(0, direction.y() > 0.0 ? 1 : -1);
}

GridPoint random_walker_intent(const WalkerState& w, const RectRegion& region,
                               const SimParams& params, Rng& rng) {
  if (!region.contains(w.pos)) return step_back_intent(w.pos, region, rng);
  if (!rng.bernoulli(params.p)) return w.pos;
  return w.pos + kCardinal[rng.below(4)];
}

GridPoint lane_walker_intent(const WalkerState& w, const LanePath& path, double half_width,
                             const SimParams& params, Rng& rng) {
  if (rng.bernoulli(params.q)) {
    const Vec2 b = to_real(w.pos);
    const PathQuery q = closest_point_on_path(path, b);
    const Vec2 offset = q.point - b;
    const Vec2 direction = offset.norm() > half_width ? offset : q.tangent;
    return w.pos + grid_quantize_step(direction, rng);
  }
  if (!rng.bernoulli(params.p)) return w.pos;
  return w.pos + kCardinal[rng.below(4)];
}

std::vector<WalkerState> spawn_walkers(const Scenario& scenario, const SimParams& params,
                                       Rng& rng) {
  scenario.validate();
  params.validate();
  std::vector<WalkerState> walkers;
  std::unordered_set<std::uint64_t> used;

  const auto place_group = [&](const RectRegion& region, WalkerKind kind, int lane) {
    const long count = std::lround(params.density * region.area());
    // Free cells enumerated x-major, y ascending within a column.
    std::vector<GridPoint> cells;
    cells.reserve(region.cell_count());
    for (int x = region.first_cell_x(); x <= region.last_cell_x(); ++x) {
      for (int y = region.first_cell_y(); y <= region.last_cell_y(); ++y) {
        if (!used.count(cell_key(x, y))) cells.emplace_back(x, y);
      }
    }
    if (count > static_cast<long>(cells.size())) {
      throw std::runtime_error("spawn_walkers: group needs " + std::to_string(count) +
                               " cells but region has only " + std::to_string(cells.size()) +
                               " free");
    }
    // Partial Fisher-Yates: the first `count` entries become the placement.
    for (long i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(cells.size() - i);
      std::swap(cells[i], cells[j]);
      walkers.push_back(
          {static_cast<NodeId>(walkers.size()), kind, lane, cells[i], true});
      used.insert(cell_key(cells[i]));
    }
  };

  place_group(scenario.crowd, WalkerKind::Random, -1);
  for (std::size_t i = 0; i < scenario.lanes.size(); ++i) {
    place_group(scenario.lanes[i].spawn, WalkerKind::Lane, static_cast<int>(i));
  }
  return walkers;
}

Simulation::Simulation(Scenario scenario, const SimParams& params, Rng& rng)
    : scenario_(std::move(scenario)), params_(params) {
  walkers_ = spawn_walkers(scenario_, params_, rng);
  occupancy_.reserve(walkers_.size() * 2);
  for (const WalkerState& w : walkers_) {
    occupancy_.emplace(cell_key(w.pos), w.id);
  }
  pushed_this_step_.assign(walkers_.size(), 0);
}

std::optional<NodeId> Simulation::occupant_at(const GridPoint& cell) const {
  const auto it = occupancy_.find(cell_key(cell));
  if (it == occupancy_.end()) return std::nullopt;
  return it->second;
}

bool Simulation::lane_walker_active() const {
  for (const WalkerState& w : walkers_) {
    if (w.active && w.kind == WalkerKind::Lane) return true;
  }
  return false;
}

void Simulation::move_walker(WalkerState& w, const GridPoint& to) {
  occupancy_.erase(cell_key(w.pos));
  occupancy_.emplace(cell_key(to), w.id);
  w.pos = to;
}

void Simulation::deactivate(WalkerState& w) {
  occupancy_.erase(cell_key(w.pos));
  w.active = false;
}

MoveOutcome Simulation::resolve_move(NodeId mover_id, const GridPoint& target, Rng& rng) {
  WalkerState& mover = walkers_[mover_id];
  MoveOutcome out;
  const auto occupant = occupant_at(target);
  if (!occupant) {
    move_walker(mover, target);
    out.moved = true;
    return out;
  }
  const NodeId blocked = *occupant;
  if (pushed_this_step_[blocked]) return out;  // already displaced this timestep
  GridPoint alternatives[3];
  int free_count = 0;
  for (const GridPoint& d : kCardinal) {
    const GridPoint cell = target + d;
    if (cell == mover.pos) continue;
    if (!occupant_at(cell)) alternatives[free_count++] = cell;
  }
  if (free_count == 0) return out;
  const std::size_t pick = free_count == 1 ? 0 : rng.below(free_count);
  move_walker(walkers_[blocked], alternatives[pick]);
  pushed_this_step_[blocked] = 1;
  move_walker(mover, target);
  out.moved = true;
  out.pushed = blocked;
  return out;
}

void Simulation::step(Rng& rng) {
  order_.clear();
  for (const WalkerState& w : walkers_) {
    if (w.active) order_.push_back(w.id);
  }
  rng.shuffle(order_);
  std::fill(pushed_this_step_.begin(), pushed_this_step_.end(), 0);
  for (const NodeId id : order_) {
    WalkerState& w = walkers_[id];
    GridPoint intent;
    if (w.kind == WalkerKind::Random) {
      intent = random_walker_intent(w, scenario_.crowd, params_, rng);
    } else {
      const LaneSpec& lane = scenario_.lanes[w.lane];
      intent = lane_walker_intent(w, lane.path, lane.half_width(), params_, rng);
    }
    if (intent != w.pos) resolve_move(id, intent, rng);
    if (w.kind == WalkerKind::Lane) {
      // Completion check runs every timestep, whether or not the move
      // succeeded: reaching the end of the path retires the walker.
      const LaneSpec& lane = scenario_.lanes[w.lane];
      const PathQuery q = closest_point_on_path(lane.path, to_real(w.pos));
      if (q.arc >= lane.path.total_length() - 1e-9) deactivate(w);
    }
  }
  ++t_;
}

SimTrace run_simulation(const Scenario& scenario, const SimParams& params) {
  Rng rng(params.seed);
  Simulation sim(scenario, params, rng);

  SimTrace trace;
  trace.node_count = static_cast<int>(sim.walkers().size());
  trace.group.reserve(trace.node_count);
  for (const WalkerState& w : sim.walkers()) {
    trace.group.push_back(w.kind == WalkerKind::Random ? kRandomGroup : w.lane);
  }
  const auto record = [&] {
    TraceFrame frame;
    frame.active.reserve(trace.node_count);
    frame.pos.reserve(trace.node_count);
    for (const WalkerState& w : sim.walkers()) {
      frame.active.push_back(w.active ? 1 : 0);
      frame.pos.push_back(w.pos);
    }
    trace.frames.push_back(std::move(frame));
  };

  record();
  while (sim.timestep() < params.max_timesteps && sim.lane_walker_active()) {
    sim.step(rng);
    record();
  }
  return trace;
}

}  // namespace lanedet
