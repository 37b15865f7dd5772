#include "lanedet/proximity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace lanedet {

std::vector<Edge> proximity_edges_at(const SimTrace& trace, int t, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("proximity: radius must be > 0");
  const TraceFrame& frame = trace.frames.at(t);

  std::unordered_map<std::uint64_t, std::vector<NodeId>> buckets;
  const auto bucket_of = [&](const GridPoint& p) {
    return cell_key(static_cast<int>(std::floor(p.x() / radius)),
                    static_cast<int>(std::floor(p.y() / radius)));
  };
  for (NodeId i = 0; i < trace.node_count; ++i) {
    if (frame.active[i]) buckets[bucket_of(frame.pos[i])].push_back(i);
  }

  const double r2 = radius * radius;
  std::vector<Edge> edges;
  for (NodeId i = 0; i < trace.node_count; ++i) {
    if (!frame.active[i]) continue;
    const GridPoint& pi = frame.pos[i];
    const int cx = static_cast<int>(std::floor(pi.x() / radius));
    const int cy = static_cast<int>(std::floor(pi.y() / radius));
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find(cell_key(cx + dx, cy + dy));
        if (it == buckets.end()) continue;
        for (const NodeId j : it->second) {
          if (j <= i) continue;
          const double ddx = pi.x() - frame.pos[j].x();
          const double ddy = pi.y() - frame.pos[j].y();
          if (ddx * ddx + ddy * ddy < r2) edges.emplace_back(i, j);
        }
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

TemporalProximityGraph build_proximity_graph(const SimTrace& trace, double radius) {
  TemporalProximityGraph graph;
  graph.node_count = trace.node_count;
  graph.frames.reserve(trace.frames.size());
  for (int t = 0; t <= trace.t_end(); ++t) {
    graph.frames.push_back(proximity_edges_at(trace, t, radius));
  }
  return graph;
}

void write_edges_csv(const TemporalProximityGraph& graph, std::ostream& out) {
  out << "t,i,j\n";
  for (std::size_t t = 0; t < graph.frames.size(); ++t) {
    for (const Edge& e : graph.frames[t]) {
      out << t << ',' << e.first << ',' << e.second << '\n';
    }
  }
}

void write_edges_csv(const TemporalProximityGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_edges_csv(graph, out);
}

TemporalProximityGraph read_edges_csv(std::istream& in) {
  TemporalProximityGraph graph;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("edge CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,i,j") throw std::runtime_error("edge CSV: missing 't,i,j' header");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    long values[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    bool ok = true;
    for (int f = 0; f < 3 && ok; ++f) {
      const auto res = std::from_chars(p, end, values[f]);
      ok = res.ec == std::errc();
      p = res.ptr;
      if (f < 2) {
        ok = ok && p < end && *p == ',';
        ++p;
      }
    }
    if (!ok || p != end || values[0] < 0 || values[1] < 0 || values[1] >= values[2]) {
      throw std::runtime_error("edge CSV: parse error at line " + std::to_string(line_no) +
                               ": '" + line + "'");
    }
    const long t = values[0];
    if (t >= static_cast<long>(graph.frames.size())) graph.frames.resize(t + 1);
    graph.frames[t].emplace_back(static_cast<NodeId>(values[1]),
                                 static_cast<NodeId>(values[2]));
    graph.node_count = std::max(graph.node_count, static_cast<int>(values[2]) + 1);
  }
  return graph;
}

TemporalProximityGraph read_edges_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_edges_csv(in);
}

}  // namespace lanedet
