#pragma once

#include "lanedet/geometry.hpp"

#include <string>
#include <vector>

namespace lanedet {

// The three trajectory comparison scores. All of them are lower-bounded by
// the current distance ||p_i(t) - p_j(t)||, which is what makes spatial
// pruning of range queries exact.
enum class ScoreKind { A, B, C };

ScoreKind parse_score_kind(const std::string& s);
std::string to_string(ScoreKind kind);

struct SimilarityParams {
  ScoreKind kind = ScoreKind::C;
  int window = 100;   // W: lookback steps behind the current timestep
  int horizon = 100;  // T: projection horizon for scores B and C

  void validate() const;
};

// Sliding window of the last W + 1 positions per node. A node gains a
// velocity only after being recorded for W + 1 consecutive timesteps;
// missing a timestep restarts its window.
class PositionHistory {
 public:
  PositionHistory(int node_count, int window);

  // Records positions for timestep t, which must be exactly one past the
  // previous call (first call must pass t = 0). `ids` ascending, aligned
  // with `positions`.
  void advance(int t, const std::vector<NodeId>& ids, const std::vector<Vec2>& positions);

  int window() const { return window_; }
  int current_t() const { return t_; }
  bool has_window(NodeId i) const;
  // All ids with a full window, ascending.
  std::vector<NodeId> nodes_with_window() const;

  // p_i(t - back); the node must have been recorded at that timestep.
  const Vec2& position(NodeId i, int back = 0) const;
  // s_i(t) = (p_i(t) - p_i(t - W)) / W; requires a full window.
  Vec2 velocity(NodeId i) const;

 private:
  int slot(int t) const { return t % (window_ + 1); }

  int window_ = 0;
  int t_ = -1;
  int node_count_ = 0;
  std::vector<Vec2> ring_;  // node-major, window_ + 1 slots per node
  std::vector<int> first_t_;
  std::vector<int> last_t_;
};

// Largest current-position distance over the whole window:
//   max_{0 <= dt <= W} ||p_i(t - dt) - p_j(t - dt)||.
double score_a(const PositionHistory& history, NodeId i, NodeId j);

// Current distance or distance after T steps of linear extrapolation,
// whichever is larger:
//   max(||dp(t)||, ||(p_i + T s_i) - (p_j + T s_j)||).
double score_b(const PositionHistory& history, NodeId i, NodeId j, int horizon);

// Current distance or T times the velocity difference, whichever is
// larger:
//   max(||dp(t)||, T ||s_i - s_j||).
double score_c(const PositionHistory& history, NodeId i, NodeId j, int horizon);

double score(const SimilarityParams& params, const PositionHistory& history, NodeId i,
             NodeId j);

}  // namespace lanedet
