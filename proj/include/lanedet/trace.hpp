#pragma once

#include "lanedet/geometry.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lanedet {

constexpr int kRandomGroup = -1;

// One snapshot per timestep. `pos` entries are only meaningful where
// `active` is set.
struct TraceFrame {
  std::vector<std::uint8_t> active;
  std::vector<GridPoint> pos;
};

// Full walker trace of a run. Group labels are fixed for the whole run:
// kRandomGroup for crowd walkers, the lane index otherwise.
struct SimTrace {
  int node_count = 0;
  std::vector<int> group;
  std::vector<TraceFrame> frames;

  int t_end() const { return static_cast<int>(frames.size()) - 1; }
  std::vector<NodeId> active_nodes(int t) const;
};

// "R" for the crowd, "L0", "L1", ... per lane.
std::string group_label(int group);
int parse_group_label(const std::string& label);

// CSV layout: header "t,node_id,x,y,label", one row per active walker per
// timestep, sorted by (t, node_id).
void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_trace_csv(const SimTrace& trace, const std::string& path);
SimTrace read_trace_csv(std::istream& in);
SimTrace read_trace_csv(const std::string& path);

// Real-valued sibling of SimTrace used for exported layout coordinates;
// CSV header "t,node_id,x,y".
struct PlanarFrame {
  std::vector<std::uint8_t> active;
  std::vector<Vec2> pos;
};

struct PlanarTrace {
  int node_count = 0;
  std::vector<PlanarFrame> frames;
  int t_end() const { return static_cast<int>(frames.size()) - 1; }
};

void write_planar_csv(const PlanarTrace& trace, std::ostream& out);
void write_planar_csv(const PlanarTrace& trace, const std::string& path);
PlanarTrace read_planar_csv(std::istream& in);
PlanarTrace read_planar_csv(const std::string& path);

}  // namespace lanedet
