#include "lanedet/embedding.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace lanedet;
using namespace testsupport;

namespace {

double pair_distance(const EmbeddingState& state, NodeId a, NodeId b) {
  return (state.pos[a] - state.pos[b]).norm();
}

}  // namespace

TEST_CASE("two connected nodes settle at the ideal spacing") {
  LayoutParams params;  // k = 1 * sqrt(100) = 10
  REQUIRE(params.k() == doctest::Approx(10.0));
  const std::vector<Edge> edge{{0, 1}};
  const std::vector<NodeId> nodes{0, 1};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const EmbeddingState state = embed_initial(2, edge, nodes, params, rng);
    const double d = pair_distance(state, 0, 1);
    CHECK(std::abs(d - 10.0) <= 0.5);  // within 5 percent of k
  }
}

TEST_CASE("a settled layout is a fixed point of the incremental update") {
  LayoutParams params;
  params.incremental_temperature = 0.01;  // reheat well below the force scale
  const std::vector<Edge> edge{{0, 1}};
  const std::vector<NodeId> nodes{0, 1};
  Rng rng(3);
  EmbeddingState state = embed_initial(2, edge, nodes, params, rng);
  for (int rep = 0; rep < 5; ++rep) {
    const double moved = embed_step(state, edge, nodes, params, rng);
    CHECK(moved <= 0.01 * params.k() + 1e-12);  // the cap is honored
    CHECK(std::abs(pair_distance(state, 0, 1) - 10.0) <= 1.0);
  }
}

TEST_CASE("layout distances track graph distances on a mesh") {
  // 15 x 15 grid graph; ranks of layout distances from a corner should
  // follow the ranks of hop counts.
  const int side = 15, n = side * side;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(n);
  const auto at = [side](int x, int y) { return y * side + x; };
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (x + 1 < side) edges.emplace_back(at(x, y), at(x + 1, y));
      if (y + 1 < side) edges.emplace_back(at(x, y), at(x, y + 1));
    }
  }
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<NodeId> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = i;

  Rng rng(1);
  const EmbeddingState state = embed_initial(n, edges, nodes, LayoutParams{}, rng);

  for (const int source : {at(0, 0), at(7, 7)}) {
    const std::vector<int> hops = bfs_distances(n, adj, source);
    std::vector<double> laid, graph;
    for (int i = 0; i < n; ++i) {
      if (i == source) continue;
      laid.push_back(pair_distance(state, source, i));
      graph.push_back(static_cast<double>(hops[i]));
    }
    CHECK(spearman(laid, graph) >= 0.8);
  }
}

TEST_CASE("newcomers start at the centroid of their placed neighbors") {
  EmbeddingState state;
  state.pos = {Vec2(3.0, 4.0), Vec2(7.0, 8.0)};
  state.present = {1, 1};
  LayoutParams params;
  params.incremental_iterations = 0;  // placement only, no force pass
  Rng rng(5);

  const std::vector<Edge> edges{{0, 2}, {1, 2}};
  const double moved = embed_step(state, edges, {0, 1, 2}, params, rng);
  CHECK(moved == 0.0);
  CHECK(state.pos[2] == Vec2(5.0, 6.0));  // exact midpoint
  CHECK(state.pos[0] == Vec2(3.0, 4.0));  // survivors hold position
  CHECK(state.pos[1] == Vec2(7.0, 8.0));
  CHECK(state.present_nodes() == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("a friendless newcomer lands somewhere random in the frame") {
  EmbeddingState state;
  state.pos = {Vec2(1.0, 1.0)};
  state.present = {1};
  LayoutParams params;
  params.incremental_iterations = 0;
  Rng rng(6);
  embed_step(state, {}, {0, 3}, params, rng);
  const double side = params.frame_side(2);
  CHECK(state.pos[3].x() >= 0.0);
  CHECK(state.pos[3].x() <= side);
  CHECK(state.pos[3].y() >= 0.0);
  CHECK(state.pos[3].y() <= side);
  CHECK(state.present_nodes() == std::vector<NodeId>{0, 3});

  // Same seed, same placement.
  EmbeddingState again;
  again.pos = {Vec2(1.0, 1.0)};
  again.present = {1};
  Rng rng2(6);
  embed_step(again, {}, {0, 3}, params, rng2);
  CHECK(again.pos[3] == state.pos[3]);
}

TEST_CASE("departed nodes drop out of the presence mask") {
  EmbeddingState state;
  state.pos = {Vec2(0.0, 0.0), Vec2(5.0, 0.0), Vec2(9.0, 2.0)};
  state.present = {1, 1, 1};
  LayoutParams params;
  params.incremental_iterations = 0;
  Rng rng(7);
  embed_step(state, {}, {0, 2}, params, rng);
  CHECK(state.present_nodes() == std::vector<NodeId>{0, 2});
  CHECK(state.pos[0] == Vec2(0.0, 0.0));
  CHECK(state.pos[2] == Vec2(9.0, 2.0));
}

TEST_CASE("layouts reproduce bitwise under a fixed seed") {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  std::vector<NodeId> nodes{0, 1, 2, 3};
  LayoutParams params;
  Rng r1(42), r2(42);
  const EmbeddingState a = embed_initial(4, edges, nodes, params, r1);
  const EmbeddingState b = embed_initial(4, edges, nodes, params, r2);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.pos[i].x() == b.pos[i].x());
    CHECK(a.pos[i].y() == b.pos[i].y());
  }

  EmbeddingState sa = a, sb = b;
  const double ma = embed_step(sa, edges, nodes, params, r1);
  const double mb = embed_step(sb, edges, nodes, params, r2);
  CHECK(ma == mb);
  for (int i = 0; i < 4; ++i) {
    CHECK(sa.pos[i].x() == sb.pos[i].x());
    CHECK(sa.pos[i].y() == sb.pos[i].y());
  }
}

TEST_CASE("repulsion cutoff ignores far pairs and keeps near ones") {
  LayoutParams params;  // k = 10, cutoff = 20
  params.incremental_iterations = 1;

  // Distance 25 > 2k, no edges: with the cutoff nothing moves at all.
  EmbeddingState far;
  far.pos = {Vec2(0.0, 0.0), Vec2(25.0, 0.0)};
  far.present = {1, 1};
  params.cutoff_repulsion = true;
  Rng rng(8);
  CHECK(embed_step(far, {}, {0, 1}, params, rng) == 0.0);
  params.cutoff_repulsion = false;
  CHECK(embed_step(far, {}, {0, 1}, params, rng) > 0.0);

  // Distance 15 < 2k: both modes apply the identical displacement.
  EmbeddingState near_exact, near_cut;
  near_exact.pos = near_cut.pos = {Vec2(0.0, 0.0), Vec2(15.0, 0.0)};
  near_exact.present = near_cut.present = {1, 1};
  params.cutoff_repulsion = false;
  embed_step(near_exact, {}, {0, 1}, params, rng);
  params.cutoff_repulsion = true;
  embed_step(near_cut, {}, {0, 1}, params, rng);
  CHECK(near_exact.pos[0] == near_cut.pos[0]);
  CHECK(near_exact.pos[1] == near_cut.pos[1]);
}

TEST_CASE("stacked nodes separate instead of dividing by zero") {
  EmbeddingState state;
  state.pos = {Vec2(4.0, 4.0), Vec2(4.0, 4.0)};
  state.present = {1, 1};
  LayoutParams params;
  params.incremental_iterations = 3;
  Rng rng(9);
  embed_step(state, {}, {0, 1}, params, rng);
  const double d = pair_distance(state, 0, 1);
  CHECK(d > 0.0);
  CHECK(std::isfinite(state.pos[0].x()));
  CHECK(std::isfinite(state.pos[1].y()));
}

TEST_CASE("edges must connect nodes of the frame") {
  EmbeddingState state;
  state.pos = {Vec2(0.0, 0.0), Vec2(1.0, 0.0)};
  state.present = {1, 1};
  LayoutParams params;
  Rng rng(10);
  // Node 1 exists in the state but is not part of this frame.
  CHECK_THROWS_AS(embed_step(state, {{0, 1}}, {0}, params, rng), std::invalid_argument);
  // Endpoint beyond any known id.
  EmbeddingState other;
  other.pos = {Vec2(0.0, 0.0), Vec2(1.0, 0.0)};
  other.present = {1, 1};
  CHECK_THROWS_AS(embed_step(other, {{0, 9}}, {0, 1}, params, rng), std::invalid_argument);

  Rng rng2(11);
  CHECK_THROWS_AS(embed_initial(2, {{0, 5}}, {0, 1}, params, rng2), std::invalid_argument);
}

TEST_CASE("an empty frame yields an empty layout") {
  LayoutParams params;
  Rng rng(12);
  const EmbeddingState state = embed_initial(3, {}, {}, params, rng);
  CHECK(state.present_nodes().empty());
  CHECK(state.pos.size() == 3);
}
