#pragma once

#include "lanedet/proximity.hpp"
#include "lanedet/rng.hpp"

#include <vector>

namespace lanedet {

// Force-directed layout: attraction d^2/k along edges, repulsion k^2/d
// between all node pairs, per-iteration displacement capped by the
// temperature. The ideal spacing is k = spacing * sqrt(frame_area / n)
// with frame_area = n * area_per_node, so k stays constant as nodes come
// and go.
struct LayoutParams {
  double spacing = 1.0;
  double area_per_node = 100.0;
  int initial_iterations = 500;
  int incremental_iterations = 20;
  double incremental_temperature = 0.1;  // fraction of k
  double tolerance = 1e-3;               // converged when max step < tolerance * k
  // Skip repulsion beyond 2k via a uniform grid. Off by default; the exact
  // all-pairs sum is the reference behavior.
  bool cutoff_repulsion = false;

  void validate() const;

  double k() const;
  double frame_side(std::size_t n) const;
};

// Layout coordinates indexed by node id with a presence mask.
struct EmbeddingState {
  std::vector<Vec2> pos;
  std::vector<std::uint8_t> present;

  std::vector<NodeId> present_nodes() const;
};

// Fresh layout for the first frame: nodes start uniformly random in the
// frame square, then run `initial_iterations` with the temperature cooled
// linearly to zero, stopping early once the largest applied step falls
// under tolerance * k.
EmbeddingState embed_initial(int node_count, const std::vector<Edge>& edges,
                             const std::vector<NodeId>& nodes, const LayoutParams& params,
                             Rng& rng);

// Warm-started update for the next frame: surviving nodes keep their
// coordinates, departed nodes are dropped, and new nodes enter at the
// centroid of their already-placed neighbors (random in the frame if they
// have none). Then runs `incremental_iterations` at the constant reheat
// temperature. Returns the largest step applied.
double embed_step(EmbeddingState& state, const std::vector<Edge>& edges,
                  const std::vector<NodeId>& nodes, const LayoutParams& params, Rng& rng);

}  // namespace lanedet
