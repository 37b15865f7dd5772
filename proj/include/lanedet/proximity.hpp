#pragma once

#include "lanedet/trace.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lanedet {

using Edge = std::pair<NodeId, NodeId>;

// Per-timestep undirected edge sets over node identities. Edges carry no
// distance or position payload; frame index equals timestep.
struct TemporalProximityGraph {
  int node_count = 0;
  std::vector<std::vector<Edge>> frames;

  int t_end() const { return static_cast<int>(frames.size()) - 1; }
};

// All pairs of active walkers strictly closer than `radius` at timestep t,
// sorted with first < second. Candidates come from a uniform grid with
// cell size = radius, which is exact for the Euclidean metric.
std::vector<Edge> proximity_edges_at(const SimTrace& trace, int t, double radius);

TemporalProximityGraph build_proximity_graph(const SimTrace& trace, double radius);

// CSV layout: header "t,i,j", one row per edge, sorted by (t, i, j).
void write_edges_csv(const TemporalProximityGraph& graph, std::ostream& out);
void write_edges_csv(const TemporalProximityGraph& graph, const std::string& path);
TemporalProximityGraph read_edges_csv(std::istream& in);
TemporalProximityGraph read_edges_csv(const std::string& path);

}  // namespace lanedet
