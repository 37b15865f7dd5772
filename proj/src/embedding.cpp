#include "lanedet/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace lanedet {

void LayoutParams::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("LayoutParams: spacing must be > 0");
  if (!(area_per_node > 0.0)) {
    throw std::invalid_argument("LayoutParams: area_per_node must be > 0");
  }
  if (initial_iterations < 1 || incremental_iterations < 0) {
    throw std::invalid_argument("LayoutParams: bad iteration budget");
  }
  if (!(incremental_temperature > 0.0) || !(tolerance > 0.0)) {
    throw std::invalid_argument("LayoutParams: temperature and tolerance must be > 0");
  }
}

double LayoutParams::k() const {
  // frame_area / n == area_per_node for any n, so the spacing is stable.
  return spacing * std::sqrt(area_per_node);
}

double LayoutParams::frame_side(std::size_t n) const {
  return std::sqrt(area_per_node * static_cast<double>(n));
}

std::vector<NodeId> EmbeddingState::present_nodes() const {
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < static_cast<NodeId>(present.size()); ++i) {
    if (present[i]) ids.push_back(i);
  }
  return ids;
}

namespace {

constexpr double kMinDist = 1e-12;

struct DenseGraph {
  std::vector<NodeId> ids;                     // dense index -> node id
  std::vector<Vec2> p;                         // dense positions
  std::vector<std::pair<int, int>> edges;      // dense endpoints
};

DenseGraph gather(const EmbeddingState& state, const std::vector<Edge>& edges,
                  const std::vector<NodeId>& nodes) {
  DenseGraph g;
  g.ids = nodes;
  g.p.reserve(nodes.size());
  std::vector<int> index(state.pos.size(), -1);
  for (std::size_t d = 0; d < nodes.size(); ++d) {
    index[nodes[d]] = static_cast<int>(d);
    g.p.push_back(state.pos[nodes[d]]);
  }
  g.edges.reserve(edges.size());
  const auto dense_index = [&index](NodeId id) {
    return id >= 0 && id < static_cast<NodeId>(index.size()) ? index[id] : -1;
  };
  for (const Edge& e : edges) {
    const int a = dense_index(e.first);
    const int b = dense_index(e.second);
    if (a < 0 || b < 0) {
      throw std::invalid_argument("embedding: edge endpoint outside the node set");
    }
    g.edges.emplace_back(a, b);
  }
  return g;
}

// Unit direction between coincident nodes comes from the rng, so stacked
// nodes separate instead of dividing by zero.
Vec2 separation(const Vec2& a, const Vec2& b, double& dist, Rng& rng) {
  Vec2 delta = a - b;
  dist = delta.norm();
  if (dist < kMinDist) {
    const double angle = rng.uniform() * 2.0 * M_PI;
    delta = Vec2(std::cos(angle), std::sin(angle)) * kMinDist;
    dist = kMinDist;
  }
  return delta;
}

// One force pass; returns the largest displacement actually applied.
double layout_iteration(DenseGraph& g, const LayoutParams& params, double temperature,
                        Rng& rng) {
  const double k = params.k();
  const std::size_t n = g.p.size();
  std::vector<Vec2> disp(n, Vec2::Zero());

  if (params.cutoff_repulsion) {
    // Grid cells of side 2k; pairs beyond that contribute negligibly.
    const double cutoff = 2.0 * k;
    std::unordered_map<std::uint64_t, std::vector<int>> cells;
    const auto cell_of = [&](const Vec2& v) {
      return cell_key(static_cast<int>(std::floor(v.x() / cutoff)),
                      static_cast<int>(std::floor(v.y() / cutoff)));
    };
    for (std::size_t i = 0; i < n; ++i) cells[cell_of(g.p[i])].push_back(i);
    for (std::size_t i = 0; i < n; ++i) {
      const int cx = static_cast<int>(std::floor(g.p[i].x() / cutoff));
      const int cy = static_cast<int>(std::floor(g.p[i].y() / cutoff));
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          const auto it = cells.find(cell_key(cx + dx, cy + dy));
          if (it == cells.end()) continue;
          for (const int j : it->second) {
            if (j <= static_cast<int>(i)) continue;
            double d = 0.0;
            const Vec2 delta = separation(g.p[i], g.p[j], d, rng);
            if (d >= cutoff) continue;
            const Vec2 f = delta * (k * k / (d * d));
            disp[i] += f;
            disp[j] -= f;
          }
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double d = 0.0;
        const Vec2 delta = separation(g.p[i], g.p[j], d, rng);
        const Vec2 f = delta * (k * k / (d * d));
        disp[i] += f;
        disp[j] -= f;
      }
    }
  }

  for (const auto& [a, b] : g.edges) {
    double d = 0.0;
    const Vec2 delta = separation(g.p[a], g.p[b], d, rng);
    const Vec2 f = delta * (d / k);
    disp[a] -= f;
    disp[b] += f;
  }

  double max_applied = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double len = disp[i].norm();
    if (len <= 0.0) continue;
    const double applied = std::min(len, temperature);
    g.p[i] += disp[i] * (applied / len);
    max_applied = std::max(max_applied, applied);
  }
  return max_applied;
}

void scatter(const DenseGraph& g, EmbeddingState& state) {
  std::fill(state.present.begin(), state.present.end(), 0);
  for (std::size_t d = 0; d < g.ids.size(); ++d) {
    state.pos[g.ids[d]] = g.p[d];
    state.present[g.ids[d]] = 1;
  }
}

}  // namespace

EmbeddingState embed_initial(int node_count, const std::vector<Edge>& edges,
                             const std::vector<NodeId>& nodes, const LayoutParams& params,
                             Rng& rng) {
  params.validate();
  EmbeddingState state;
  state.pos.assign(node_count, Vec2::Zero());
  state.present.assign(node_count, 0);

  const double side = params.frame_side(nodes.size());
  for (const NodeId id : nodes) {  // ascending: one x draw then one y draw per node
    state.pos[id] = Vec2(rng.uniform() * side, rng.uniform() * side);
    state.present[id] = 1;
  }
  if (nodes.empty()) return state;

  DenseGraph g = gather(state, edges, nodes);
  const double t0 = side / 10.0;
  const double tol = params.tolerance * params.k();
  for (int it = 0; it < params.initial_iterations; ++it) {
    const double temperature =
        t0 * static_cast<double>(params.initial_iterations - it) / params.initial_iterations;
    const double moved = layout_iteration(g, params, temperature, rng);
    if (moved < tol) break;
  }
  scatter(g, state);
  return state;
}

double embed_step(EmbeddingState& state, const std::vector<Edge>& edges,
                  const std::vector<NodeId>& nodes, const LayoutParams& params, Rng& rng) {
  params.validate();
  NodeId max_id = -1;
  for (const NodeId id : nodes) max_id = std::max(max_id, id);
  if (max_id >= static_cast<NodeId>(state.pos.size())) {
    state.pos.resize(max_id + 1, Vec2::Zero());
    state.present.resize(max_id + 1, 0);
  }

  // Place newcomers at the centroid of their already-present neighbors.
  const double side = params.frame_side(nodes.size());
  std::vector<NodeId> fresh;
  for (const NodeId id : nodes) {
    if (!state.present[id]) fresh.push_back(id);
  }
  for (const NodeId id : fresh) {
    Vec2 sum = Vec2::Zero();
    int found = 0;
    for (const Edge& e : edges) {
      const NodeId other = e.first == id ? e.second : (e.second == id ? e.first : -1);
      if (other >= 0 && other < static_cast<NodeId>(state.present.size()) &&
          state.present[other]) {
        sum += state.pos[other];
        ++found;
      }
    }
    state.pos[id] = found > 0 ? Vec2(sum / found) : Vec2(rng.uniform() * side, rng.uniform() * side);
  }

  DenseGraph g;
  {
    // Presence flags are rewritten by scatter; set them up for gather now.
    std::fill(state.present.begin(), state.present.end(), 0);
    for (const NodeId id : nodes) state.present[id] = 1;
    g = gather(state, edges, nodes);
  }
  const double temperature = params.incremental_temperature * params.k();
  double max_applied = 0.0;
  for (int it = 0; it < params.incremental_iterations; ++it) {
    max_applied = std::max(max_applied, layout_iteration(g, params, temperature, rng));
  }
  scatter(g, state);
  return max_applied;
}

}  // namespace lanedet
