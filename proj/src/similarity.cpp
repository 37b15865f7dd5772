#include "lanedet/similarity.hpp"

#include <algorithm>
#include <stdexcept>

namespace lanedet {

ScoreKind parse_score_kind(const std::string& s) {
  if (s == "A" || s == "a") return ScoreKind::A;
  if (s == "B" || s == "b") return ScoreKind::B;
  if (s == "C" || s == "c") return ScoreKind::C;
  throw std::invalid_argument("score kind must be A, B or C, got '" + s + "'");
}

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::A: return "A";
    case ScoreKind::B: return "B";
    case ScoreKind::C: return "C";
  }
  throw std::logic_error("unreachable");
}

void SimilarityParams::validate() const {
  if (window < 1) throw std::invalid_argument("SimilarityParams: window must be >= 1");
  if (horizon < 0) throw std::invalid_argument("SimilarityParams: horizon must be >= 0");
}

PositionHistory::PositionHistory(int node_count, int window)
    : window_(window), node_count_(node_count) {
  if (window < 1) throw std::invalid_argument("PositionHistory: window must be >= 1");
  if (node_count < 0) throw std::invalid_argument("PositionHistory: negative node count");
  ring_.assign(static_cast<std::size_t>(node_count) * (window + 1), Vec2::Zero());
  first_t_.assign(node_count, -1);
  // -2 so a node first recorded at t = 0 is not mistaken for one recorded
  // at t = -1 (which would credit it a full window one step early).
  last_t_.assign(node_count, -2);
}

void PositionHistory::advance(int t, const std::vector<NodeId>& ids,
                              const std::vector<Vec2>& positions) {
  if (t != t_ + 1) {
    throw std::logic_error("PositionHistory: timesteps must advance one at a time");
  }
  if (ids.size() != positions.size()) {
    throw std::invalid_argument("PositionHistory: ids/positions size mismatch");
  }
  t_ = t;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const NodeId i = ids[k];
    if (last_t_[i] != t - 1) first_t_[i] = t;  // fresh or interrupted: restart
    last_t_[i] = t;
    ring_[static_cast<std::size_t>(i) * (window_ + 1) + slot(t)] = positions[k];
  }
}

bool PositionHistory::has_window(NodeId i) const {
  return last_t_[i] == t_ && t_ - first_t_[i] >= window_;
}

std::vector<NodeId> PositionHistory::nodes_with_window() const {
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < node_count_; ++i) {
    if (has_window(i)) ids.push_back(i);
  }
  return ids;
}

const Vec2& PositionHistory::position(NodeId i, int back) const {
  if (back < 0 || back > window_) {
    throw std::out_of_range("PositionHistory: lookback outside window");
  }
  const int t = t_ - back;
  if (last_t_[i] != t_ || first_t_[i] > t) {
    throw std::logic_error("PositionHistory: node not recorded at requested timestep");
  }
  return ring_[static_cast<std::size_t>(i) * (window_ + 1) + slot(t)];
}

Vec2 PositionHistory::velocity(NodeId i) const {
  if (!has_window(i)) {
    throw std::logic_error("PositionHistory: velocity undefined without a full window");
  }
  return (position(i, 0) - position(i, window_)) / static_cast<double>(window_);
}

double score_a(const PositionHistory& history, NodeId i, NodeId j) {
  double worst = 0.0;
  for (int back = 0; back <= history.window(); ++back) {
    worst = std::max(worst, (history.position(i, back) - history.position(j, back)).norm());
  }
  return worst;
}

double score_b(const PositionHistory& history, NodeId i, NodeId j, int horizon) {
  const double now = (history.position(i) - history.position(j)).norm();
  const Vec2 pi = history.position(i) + horizon * history.velocity(i);
  const Vec2 pj = history.position(j) + horizon * history.velocity(j);
  return std::max(now, (pi - pj).norm());
}

double score_c(const PositionHistory& history, NodeId i, NodeId j, int horizon) {
  const double now = (history.position(i) - history.position(j)).norm();
  return std::max(now, horizon * (history.velocity(i) - history.velocity(j)).norm());
}

double score(const SimilarityParams& params, const PositionHistory& history, NodeId i,
             NodeId j) {
  switch (params.kind) {
    case ScoreKind::A: return score_a(history, i, j);
    case ScoreKind::B: return score_b(history, i, j, params.horizon);
    case ScoreKind::C: return score_c(history, i, j, params.horizon);
  }
  throw std::logic_error("unreachable");
}

}  // namespace lanedet
