#include "lanedet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lanedet {

void DbscanParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("DbscanParams: epsilon must be > 0");
  if (min_pts < 1) throw std::invalid_argument("DbscanParams: min_pts must be >= 1");
}

std::vector<NodeId> epsilon_neighborhood(NodeId i, const std::vector<NodeId>& eligible,
                                         const ScoreFn& score, double epsilon) {
  std::vector<NodeId> out;
  for (const NodeId j : eligible) {
    if (j != i && score(i, j) < epsilon) out.push_back(j);
  }
  return out;
}

RangeQuery make_bruteforce_query(std::vector<NodeId> eligible, ScoreFn score,
                                 double epsilon) {
  std::sort(eligible.begin(), eligible.end());
  return [eligible = std::move(eligible), score = std::move(score),
          epsilon](NodeId i, std::vector<NodeId>& out) {
    for (const NodeId j : eligible) {
      if (j != i && score(i, j) < epsilon) out.push_back(j);
    }
  };
}

Partition dbscan(const std::vector<NodeId>& eligible, const RangeQuery& query,
                 const DbscanParams& params, Rng& rng) {
  params.validate();
  constexpr std::int32_t kUnvisited = -2;
  constexpr std::int32_t kNoise = -1;

  NodeId max_id = -1;
  for (const NodeId id : eligible) max_id = std::max(max_id, id);
  std::vector<std::int32_t> label(max_id + 1, kUnvisited);

  // A node is core when its neighborhood (which excludes the node) reaches
  // this count.
  const int need = params.min_pts - (params.count_self ? 1 : 0);

  std::vector<NodeId> order(eligible);
  rng.shuffle(order);

  std::int32_t next_cluster = 0;
  std::vector<NodeId> neighbors, seeds;
  for (const NodeId v : order) {
    if (label[v] != kUnvisited) continue;
    neighbors.clear();
    query(v, neighbors);
    if (static_cast<int>(neighbors.size()) < need) {
      label[v] = kNoise;
      continue;
    }
    const std::int32_t cluster = next_cluster++;
    label[v] = cluster;
    seeds.assign(neighbors.begin(), neighbors.end());
    while (!seeds.empty()) {
      const NodeId u = seeds.back();
      seeds.pop_back();
      if (label[u] == kNoise) {  // border node: first cluster to reach it wins
        label[u] = cluster;
        continue;
      }
      if (label[u] != kUnvisited) continue;
      label[u] = cluster;
      neighbors.clear();
      query(u, neighbors);
      if (static_cast<int>(neighbors.size()) >= need) {
        seeds.insert(seeds.end(), neighbors.begin(), neighbors.end());
      }
    }
  }

  Partition part;
  part.nodes = eligible;
  std::sort(part.nodes.begin(), part.nodes.end());
  part.labels.reserve(part.nodes.size());
  part.core_cluster_count = next_cluster;
  for (const NodeId id : part.nodes) {
    std::int32_t l = label[id];
    if (l == kNoise) l = next_cluster++;  // leftover noise becomes a singleton
    part.labels.push_back(l);
  }
  return part;
}

GridRangeQuery::GridRangeQuery(const std::vector<NodeId>& eligible,
                               const std::vector<Vec2>& positions, ScoreFn score,
                               double epsilon)
    : positions_(&positions), score_(std::move(score)), epsilon_(epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("GridRangeQuery: epsilon must be > 0");
  for (const NodeId id : eligible) {
    const Vec2& p = positions[id];
    buckets_[cell_key(static_cast<int>(std::floor(p.x() / epsilon_)),
                      static_cast<int>(std::floor(p.y() / epsilon_)))]
        .push_back(id);
  }
}

void GridRangeQuery::operator()(NodeId i, std::vector<NodeId>& out) const {
  const std::size_t start = out.size();
  const Vec2& p = (*positions_)[i];
  const int cx = static_cast<int>(std::floor(p.x() / epsilon_));
  const int cy = static_cast<int>(std::floor(p.y() / epsilon_));
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      const auto it = buckets_.find(cell_key(cx + dx, cy + dy));
      if (it == buckets_.end()) continue;
      for (const NodeId j : it->second) {
        if (j != i && score_(i, j) < epsilon_) out.push_back(j);
      }
    }
  }
  // Ascending output keeps the expansion order (and thus the partition)
  // identical to the brute-force query.
  std::sort(out.begin() + start, out.end());
}

MatrixRangeQuery::MatrixRangeQuery(std::vector<NodeId> eligible, const ScoreFn& score,
                                   double epsilon)
    : eligible_(std::move(eligible)), epsilon_(epsilon) {
  std::sort(eligible_.begin(), eligible_.end());
  NodeId max_id = -1;
  for (const NodeId id : eligible_) max_id = std::max(max_id, id);
  index_of_.assign(max_id + 1, -1);
  for (std::size_t k = 0; k < eligible_.size(); ++k) index_of_[eligible_[k]] = k;
  const std::size_t n = eligible_.size();
  scores_.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double s = score(eligible_[a], eligible_[b]);
      scores_[a * n + b] = s;
      scores_[b * n + a] = s;
    }
  }
}

void MatrixRangeQuery::operator()(NodeId i, std::vector<NodeId>& out) const {
  const std::size_t n = eligible_.size();
  const std::size_t row = index_of_[i];
  for (std::size_t b = 0; b < n; ++b) {
    if (b != row && scores_[row * n + b] < epsilon_) out.push_back(eligible_[b]);
  }
}

}  // namespace lanedet
