#include "lanedet/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace lanedet {

namespace {

// Distinct stream tags so derived seeds never collide across purposes.
constexpr std::uint64_t kDetectStream = 0x646574656374ull;  // "detect"
constexpr std::uint64_t kLayoutStream = 0x6c61796f7574ull;  // "layout"
constexpr std::uint64_t kRepStream = 0x726570ull;           // "rep"

ScoreFn make_score_fn(const SimilarityParams& params, const PositionHistory& history) {
  switch (params.kind) {
    case ScoreKind::A:
      return [&history](NodeId i, NodeId j) { return score_a(history, i, j); };
    case ScoreKind::B:
      return [&history, horizon = params.horizon](NodeId i, NodeId j) {
        return score_b(history, i, j, horizon);
      };
    case ScoreKind::C:
      return [&history, horizon = params.horizon](NodeId i, NodeId j) {
        return score_c(history, i, j, horizon);
      };
  }
  throw std::logic_error("unreachable");
}

}  // namespace

PipelineMode parse_pipeline_mode(const std::string& s) {
  if (s == "raw") return PipelineMode::Raw;
  if (s == "embedded") return PipelineMode::Embedded;
  throw std::invalid_argument("mode must be raw or embedded, got '" + s + "'");
}

std::string to_string(PipelineMode mode) {
  return mode == PipelineMode::Raw ? "raw" : "embedded";
}

void PipelineConfig::validate() const {
  scenario.validate();
  sim.validate();
  similarity.validate();
  layout.validate();
  if (min_pts < 1) throw std::invalid_argument("PipelineConfig: min_pts must be >= 1");
  if (epsilons.empty()) throw std::invalid_argument("PipelineConfig: no epsilon values");
  for (const double e : epsilons) {
    if (!(e > 0.0)) throw std::invalid_argument("PipelineConfig: epsilon must be > 0");
  }
  if (!(detection_radius > 0.0)) {
    throw std::invalid_argument("PipelineConfig: detection_radius must be > 0");
  }
}

PipelineResult detect_frames(int node_count, int t_end, const FrameSource& source,
                             const std::vector<int>* groups, const PipelineConfig& config,
                             const PartitionSink& sink) {
  config.validate();
  const int window = config.similarity.window;
  const std::uint64_t detect_seed = config.detect_seed != 0
                                        ? config.detect_seed
                                        : mix_seed(config.sim.seed, kDetectStream);

  PipelineResult result;
  result.first_scored_t = window;
  result.last_scored_t = t_end;
  result.epsilons = config.epsilons;
  result.nmi_series.resize(config.epsilons.size());

  PositionHistory history(node_count, window);
  const ScoreFn score_fn = make_score_fn(config.similarity, history);

  std::vector<NodeId> ids;
  std::vector<Vec2> positions;
  std::vector<Vec2> node_pos(node_count, Vec2::Zero());
  std::vector<std::int32_t> truth;

  for (int t = 0; t <= t_end; ++t) {
    ids.clear();
    positions.clear();
    source(t, ids, positions);
    history.advance(t, ids, positions);
    if (t < window) continue;

    const std::vector<NodeId> eligible = history.nodes_with_window();
    if (eligible.empty()) continue;
    for (std::size_t k = 0; k < ids.size(); ++k) node_pos[ids[k]] = positions[k];

    if (groups) {
      truth.clear();
      for (const NodeId id : eligible) truth.push_back((*groups)[id]);
    }
    for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
      const double epsilon = config.epsilons[e];
      const GridRangeQuery query(eligible, node_pos, score_fn, epsilon);
      Rng order_rng(mix_seed(detect_seed, static_cast<std::uint64_t>(t), e));
      Partition part = dbscan(eligible, RangeQuery(std::ref(query)),
                              DbscanParams{epsilon, config.min_pts, config.count_self},
                              order_rng);
      part.t = t;
      if (groups) {
        result.nmi_series[e].push_back(nmi(part.labels, truth, config.nmi_norm));
      }
      if (sink) sink(e, part);
    }
  }

  result.mean_nmi.reserve(result.nmi_series.size());
  for (const auto& series : result.nmi_series) {
    result.mean_nmi.push_back(series.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : mean_nmi(series));
  }
  return result;
}

FrameSource make_raw_source(const SimTrace& trace) {
  return [&trace](int t, std::vector<NodeId>& ids, std::vector<Vec2>& positions) {
    const TraceFrame& frame = trace.frames.at(t);
    for (NodeId i = 0; i < trace.node_count; ++i) {
      if (!frame.active[i]) continue;
      ids.push_back(i);
      positions.push_back(to_real(frame.pos[i]));
    }
  };
}

FrameSource make_embedded_source(const SimTrace& trace, const PipelineConfig& config) {
  const std::uint64_t detect_seed =
      config.detect_seed != 0 ? config.detect_seed : mix_seed(config.sim.seed, kDetectStream);
  auto state = std::make_shared<EmbeddingState>();
  auto rng = std::make_shared<Rng>(mix_seed(detect_seed, kLayoutStream));
  const LayoutParams layout = config.layout;
  const double radius = config.detection_radius;
  return [&trace, state, rng, layout, radius](int t, std::vector<NodeId>& ids,
                                              std::vector<Vec2>& positions) {
    ids = trace.active_nodes(t);
    const std::vector<Edge> edges = proximity_edges_at(trace, t, radius);
    if (t == 0) {
      *state = embed_initial(trace.node_count, edges, ids, layout, *rng);
    } else {
      embed_step(*state, edges, ids, layout, *rng);
    }
    positions.reserve(ids.size());
    for (const NodeId id : ids) positions.push_back(state->pos[id]);
  };
}

FrameSource make_embedded_source(const TemporalProximityGraph& graph,
                                 const std::vector<std::vector<NodeId>>& activity,
                                 const PipelineConfig& config) {
  const std::uint64_t detect_seed =
      config.detect_seed != 0 ? config.detect_seed : mix_seed(config.sim.seed, kDetectStream);
  auto state = std::make_shared<EmbeddingState>();
  auto rng = std::make_shared<Rng>(mix_seed(detect_seed, kLayoutStream));
  const LayoutParams layout = config.layout;
  return [&graph, &activity, state, rng, layout](int t, std::vector<NodeId>& ids,
                                                 std::vector<Vec2>& positions) {
    ids = activity.at(t);
    const std::vector<Edge>& edges = graph.frames.at(t);
    if (t == 0) {
      *state = embed_initial(graph.node_count, edges, ids, layout, *rng);
    } else {
      embed_step(*state, edges, ids, layout, *rng);
    }
    positions.reserve(ids.size());
    for (const NodeId id : ids) positions.push_back(state->pos[id]);
  };
}

std::vector<std::vector<NodeId>> activity_from_edges(const TemporalProximityGraph& graph) {
  std::vector<int> first(graph.node_count, -1);
  std::vector<int> last(graph.node_count, -1);
  for (int t = 0; t <= graph.t_end(); ++t) {
    for (const Edge& e : graph.frames[t]) {
      for (const NodeId id : {e.first, e.second}) {
        if (first[id] < 0) first[id] = t;
        last[id] = t;
      }
    }
  }
  std::vector<std::vector<NodeId>> activity(graph.frames.size());
  for (int t = 0; t <= graph.t_end(); ++t) {
    for (NodeId id = 0; id < graph.node_count; ++id) {
      if (first[id] >= 0 && first[id] <= t && t <= last[id]) activity[t].push_back(id);
    }
  }
  return activity;
}

PipelineResult run_pipeline_on_trace(const SimTrace& trace, const PipelineConfig& config,
                                     const PartitionSink& sink) {
  const FrameSource source = config.mode == PipelineMode::Raw
                                 ? make_raw_source(trace)
                                 : make_embedded_source(trace, config);
  return detect_frames(trace.node_count, trace.t_end(), source, &trace.group, config, sink);
}

PipelineResult run_pipeline(const PipelineConfig& config, const PartitionSink& sink) {
  config.validate();
  const SimTrace trace = run_simulation(build_scenario(config.scenario), config.sim);
  return run_pipeline_on_trace(trace, config, sink);
}

// --- experiment harness -------------------------------------------------

namespace {

// Applies one swept value; returns whether the simulation inputs changed.
bool apply_param(PipelineConfig& config, const std::string& param, double value) {
  const auto as_int = [&](const char* name) {
    const int v = static_cast<int>(std::lround(value));
    if (std::abs(value - v) > 1e-9) {
      throw std::invalid_argument(std::string("sweep: ") + name + " must be an integer");
    }
    return v;
  };
  if (param == "width") { config.scenario.width = value; return true; }
  if (param == "separation") { config.scenario.separation = value; return true; }
  if (param == "amplitude") { config.scenario.amplitude = value; return true; }
  if (param == "wavelength") { config.scenario.wavelength = value; return true; }
  if (param == "region") { config.scenario.region = value; return true; }
  if (param == "p") { config.sim.p = value; return true; }
  if (param == "q") { config.sim.q = value; return true; }
  if (param == "density") { config.sim.density = value; return true; }
  if (param == "window") { config.similarity.window = as_int("window"); return false; }
  if (param == "horizon") { config.similarity.horizon = as_int("horizon"); return false; }
  if (param == "min_pts") { config.min_pts = as_int("min_pts"); return false; }
  if (param == "radius") { config.detection_radius = value; return false; }
  throw std::invalid_argument("sweep: unknown parameter '" + param + "'");
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (repetitions < 1) throw std::invalid_argument("SweepSpec: repetitions must be >= 1");
  if (param != "epsilon") {
    if (values.empty()) throw std::invalid_argument("SweepSpec: empty value grid");
    PipelineConfig probe = base;
    apply_param(probe, param, values.front());  // rejects unknown names early
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::string scenario_name = to_string(spec.base.scenario.kind);
  std::vector<SweepRow> rows;

  if (spec.param == "epsilon") {
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      PipelineConfig config = spec.base;
      config.sim.seed = mix_seed(spec.base.sim.seed, kRepStream, rep);
      const PipelineResult result = run_pipeline(config);
      for (std::size_t e = 0; e < result.epsilons.size(); ++e) {
        rows.push_back({scenario_name, spec.param, result.epsilons[e], result.epsilons[e],
                        rep, result.mean_nmi[e]});
      }
    }
  } else {
    PipelineConfig probe = spec.base;
    const bool sim_changes = apply_param(probe, spec.param, spec.values.front());
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      const std::uint64_t seed = mix_seed(spec.base.sim.seed, kRepStream, rep);
      SimTrace shared_trace;
      if (!sim_changes) {
        PipelineConfig config = spec.base;
        config.sim.seed = seed;
        shared_trace = run_simulation(build_scenario(config.scenario), config.sim);
      }
      for (const double value : spec.values) {
        PipelineConfig config = spec.base;
        apply_param(config, spec.param, value);
        config.sim.seed = seed;
        const PipelineResult result = sim_changes
                                          ? run_pipeline(config)
                                          : run_pipeline_on_trace(shared_trace, config);
        for (std::size_t e = 0; e < result.epsilons.size(); ++e) {
          rows.push_back({scenario_name, spec.param, value, result.epsilons[e], rep,
                          result.mean_nmi[e]});
        }
      }
    }
  }
  // Stable presentation order regardless of the execution strategy.
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.rep != b.rep) return a.rep < b.rep;
    return a.epsilon < b.epsilon;
  });
  return rows;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void print_number(std::ostream& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  out << buf;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "scenario,param,value,epsilon,rep,mean_nmi\n";
  char buf[48];
  for (const SweepRow& row : rows) {
    out << row.scenario << ',' << row.param << ',';
    print_number(out, row.value);
    out << ',';
    print_number(out, row.epsilon);
    std::snprintf(buf, sizeof buf, "%.6f", row.mean_nmi);
    out << ',' << row.rep << ',' << buf << '\n';
  }
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  auto out = open_out(path);
  write_sweep_csv(rows, out);
}

void write_partitions_csv(const std::vector<Partition>& partitions, std::ostream& out) {
  out << "t,node_id,cluster_label\n";
  for (const Partition& part : partitions) {
    for (std::size_t k = 0; k < part.nodes.size(); ++k) {
      out << part.t << ',' << part.nodes[k] << ',' << part.labels[k] << '\n';
    }
  }
}

void write_partitions_csv(const std::vector<Partition>& partitions, const std::string& path) {
  auto out = open_out(path);
  write_partitions_csv(partitions, out);
}

std::vector<Partition> read_partitions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("partition CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,node_id,cluster_label") {
    throw std::runtime_error("partition CSV: missing 't,node_id,cluster_label' header");
  }
  std::map<long, Partition> by_t;
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
    if (!ok || p != end || values[0] < 0 || values[1] < 0) {
      throw std::runtime_error("partition CSV: parse error at line " +
                               std::to_string(line_no) + ": '" + line + "'");
    }
    Partition& part = by_t[values[0]];
    part.t = static_cast<int>(values[0]);
    part.nodes.push_back(static_cast<NodeId>(values[1]));
    part.labels.push_back(static_cast<std::int32_t>(values[2]));
  }
  std::vector<Partition> partitions;
  partitions.reserve(by_t.size());
  for (auto& [t, part] : by_t) {
    // Order rows by node id, keeping labels aligned.
    std::vector<std::size_t> idx(part.nodes.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&part](std::size_t a, std::size_t b) {
      return part.nodes[a] < part.nodes[b];
    });
    Partition sorted;
    sorted.t = part.t;
    sorted.nodes.reserve(idx.size());
    sorted.labels.reserve(idx.size());
    for (const std::size_t k : idx) {
      sorted.nodes.push_back(part.nodes[k]);
      sorted.labels.push_back(part.labels[k]);
    }
    partitions.push_back(std::move(sorted));
  }
  return partitions;
}

std::vector<Partition> read_partitions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_partitions_csv(in);
}

void write_nmi_csv(int first_t, const std::vector<double>& values, std::ostream& out) {
  char buf[32];
  out << "t,nmi\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f", values[k]);
    out << first_t + static_cast<int>(k) << ',' << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.6f", mean_nmi(values));
  out << "mean," << buf << '\n';
}

void write_nmi_csv(int first_t, const std::vector<double>& values, const std::string& path) {
  auto out = open_out(path);
  write_nmi_csv(first_t, values, out);
}

}  // namespace lanedet
