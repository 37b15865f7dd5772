#pragma once

#include "lanedet/geometry.hpp"
#include "lanedet/rng.hpp"

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

namespace lanedet {

struct DbscanParams {
  double epsilon = 15.0;
  int min_pts = 15;
  // When set, the node itself counts toward min_pts even though the
  // neighborhood never contains it.
  bool count_self = false;

  void validate() const;
};

// Cluster labels over a fixed node set. Noise nodes get fresh singleton
// labels, so `labels` is always a total partition of `nodes`. Labels below
// core_cluster_count are density clusters; the rest are singletons.
struct Partition {
  int t = 0;
  std::vector<NodeId> nodes;  // ascending
  std::vector<std::int32_t> labels;
  std::int32_t core_cluster_count = 0;
};

using ScoreFn = std::function<double(NodeId, NodeId)>;

// Appends every eligible j != i with score(i, j) < epsilon, ascending.
using RangeQuery = std::function<void(NodeId, std::vector<NodeId>&)>;

// Reference neighborhood: scans the whole eligible set.
std::vector<NodeId> epsilon_neighborhood(NodeId i, const std::vector<NodeId>& eligible,
                                         const ScoreFn& score, double epsilon);

RangeQuery make_bruteforce_query(std::vector<NodeId> eligible, ScoreFn score, double epsilon);

// Density clustering over an abstract range query. Nodes are processed in
// a random permutation (fresh per call), so border nodes keep the classic
// first-come assignment; everything else is order-independent.
Partition dbscan(const std::vector<NodeId>& eligible, const RangeQuery& query,
                 const DbscanParams& params, Rng& rng);

// Range query backed by a uniform grid over current positions, cell size
// epsilon. Exact for any score that never drops below the current
// distance: candidates outside the 3x3 cell block are already farther
// than epsilon in space, hence in score.
class GridRangeQuery {
 public:
  // `positions` indexed by node id; only eligible entries are read.
  GridRangeQuery(const std::vector<NodeId>& eligible, const std::vector<Vec2>& positions,
                 ScoreFn score, double epsilon);

  void operator()(NodeId i, std::vector<NodeId>& out) const;

 private:
  const std::vector<Vec2>* positions_;
  ScoreFn score_;
  double epsilon_;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> buckets_;
};

// Range query over a precomputed dense score matrix (eligible x eligible).
// Mostly a cross-check for the lazy evaluation paths.
class MatrixRangeQuery {
 public:
  MatrixRangeQuery(std::vector<NodeId> eligible, const ScoreFn& score, double epsilon);

  void operator()(NodeId i, std::vector<NodeId>& out) const;

 private:
  std::vector<NodeId> eligible_;
  std::vector<std::int32_t> index_of_;  // node id -> row, -1 when absent
  std::vector<double> scores_;          // row-major
  double epsilon_;
};

}  // namespace lanedet
