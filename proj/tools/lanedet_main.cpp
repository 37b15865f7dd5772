// Command line front end: simulate crowds, export proximity graphs and
// layouts, run lane detection, score partitions, and drive parameter
// sweeps. Every subcommand also reads `key=value` lines from a file given
// via --config; command line flags win over config values.

#include "lanedet/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace lanedet;

struct ScenarioFlags {
  std::string kind = "straight";
  ScenarioSpec spec;
};

void add_scenario_flags(CLI::App& cmd, ScenarioFlags& flags) {
  cmd.add_option("--scenario", flags.kind, "straight, sinusoidal or parallel")
      ->capture_default_str();
  cmd.add_option("--region", flags.spec.region, "crowd square side length")
      ->capture_default_str();
  cmd.add_option("--width", flags.spec.width, "lane width")->capture_default_str();
  cmd.add_option("--amplitude", flags.spec.amplitude, "sinusoidal amplitude")
      ->capture_default_str();
  cmd.add_option("--wavelength", flags.spec.wavelength, "sinusoidal period")
      ->capture_default_str();
  cmd.add_option("--separation", flags.spec.separation, "parallel lane center distance")
      ->capture_default_str();
}

void add_sim_flags(CLI::App& cmd, SimParams& params) {
  cmd.add_option("--p", params.p, "random walker step probability")->capture_default_str();
  cmd.add_option("--q", params.q, "lane walker path-following probability")
      ->capture_default_str();
  cmd.add_option("--density", params.density, "walkers per unit cell")->capture_default_str();
  cmd.add_option("--max_timesteps", params.max_timesteps, "simulation step budget")
      ->capture_default_str();
  cmd.add_option("--seed", params.seed, "simulation seed")->capture_default_str();
}

struct DetectFlags {
  std::string score = "C";
  SimilarityParams similarity;
  int min_pts = 15;
  bool count_self = false;
  std::uint64_t detect_seed = 0;
  std::string nmi_norm = "sqrt";
};

void add_detect_flags(CLI::App& cmd, DetectFlags& flags) {
  cmd.add_option("--score", flags.score, "similarity score: A, B or C")
      ->capture_default_str();
  cmd.add_option("--window", flags.similarity.window, "history window W")
      ->capture_default_str();
  cmd.add_option("--horizon", flags.similarity.horizon, "projection horizon T")
      ->capture_default_str();
  cmd.add_option("--min_pts", flags.min_pts, "density threshold")->capture_default_str();
  cmd.add_flag("--count_self", flags.count_self,
               "count the node itself toward min_pts");
  cmd.add_option("--detect_seed", flags.detect_seed,
                 "clustering order seed (0: derive from --seed)")
      ->capture_default_str();
  cmd.add_option("--nmi_norm", flags.nmi_norm, "nmi normalization: sqrt, max or mean")
      ->capture_default_str();
}

void add_layout_flags(CLI::App& cmd, LayoutParams& params) {
  cmd.add_option("--initial_iterations", params.initial_iterations,
                 "layout iterations for the first frame")
      ->capture_default_str();
  cmd.add_option("--incremental_iterations", params.incremental_iterations,
                 "layout iterations per later frame")
      ->capture_default_str();
  cmd.add_option("--layout_temperature", params.incremental_temperature,
                 "incremental temperature as a fraction of k")
      ->capture_default_str();
  cmd.add_flag("--cutoff_repulsion", params.cutoff_repulsion,
               "approximate repulsion beyond 2k away");
}

ScenarioSpec resolve_scenario(const ScenarioFlags& flags) {
  ScenarioSpec spec = flags.spec;
  spec.kind = parse_scenario_kind(flags.kind);
  return spec;
}

int cmd_simulate(const ScenarioFlags& scen, const SimParams& sim, const std::string& out) {
  const SimTrace trace = run_simulation(build_scenario(resolve_scenario(scen)), sim);
  write_trace_csv(trace, out);
  std::cout << "wrote " << out << ": " << trace.node_count << " walkers, t = 0.."
            << trace.t_end() << "\n";
  return 0;
}

int cmd_graph(const std::string& trace_path, double radius, const std::string& out) {
  const SimTrace trace = read_trace_csv(trace_path);
  const TemporalProximityGraph graph = build_proximity_graph(trace, radius);
  write_edges_csv(graph, out);
  std::size_t total = 0;
  for (const auto& frame : graph.frames) total += frame.size();
  std::cout << "wrote " << out << ": " << total << " edges over t = 0.." << graph.t_end()
            << "\n";
  return 0;
}

int cmd_embed(const std::string& graph_path, const std::string& trace_path,
              const LayoutParams& layout, std::uint64_t seed, const std::string& out) {
  const TemporalProximityGraph graph = read_edges_csv(graph_path);
  std::vector<std::vector<NodeId>> activity;
  int node_count = graph.node_count;
  if (!trace_path.empty()) {
    const SimTrace trace = read_trace_csv(trace_path);
    node_count = std::max(node_count, trace.node_count);
    for (int t = 0; t <= trace.t_end(); ++t) activity.push_back(trace.active_nodes(t));
    if (static_cast<int>(activity.size()) <= graph.t_end()) {
      throw std::runtime_error("embed: trace is shorter than the graph");
    }
    activity.resize(graph.frames.size());
  } else {
    activity = activity_from_edges(graph);
  }

  Rng rng(seed);
  EmbeddingState state;
  PlanarTrace planar;
  planar.node_count = node_count;
  for (int t = 0; t <= graph.t_end(); ++t) {
    if (t == 0) {
      state = embed_initial(node_count, graph.frames[t], activity[t], layout, rng);
    } else {
      embed_step(state, graph.frames[t], activity[t], layout, rng);
    }
    PlanarFrame frame;
    frame.active.assign(node_count, 0);
    frame.pos.assign(node_count, Vec2::Zero());
    for (const NodeId id : activity[t]) {
      frame.active[id] = 1;
      frame.pos[id] = state.pos[id];
    }
    planar.frames.push_back(std::move(frame));
  }
  write_planar_csv(planar, out);
  std::cout << "wrote " << out << ": layout for t = 0.." << planar.t_end() << "\n";
  return 0;
}

PipelineConfig assemble_config(const DetectFlags& detect, const SimParams& sim,
                               const LayoutParams& layout, const std::string& mode,
                               double radius, const std::vector<double>& epsilons) {
  PipelineConfig config;
  config.sim = sim;
  config.similarity = detect.similarity;
  config.similarity.kind = parse_score_kind(detect.score);
  config.min_pts = detect.min_pts;
  config.count_self = detect.count_self;
  config.epsilons = epsilons;
  config.mode = parse_pipeline_mode(mode);
  config.detection_radius = radius;
  config.layout = layout;
  config.nmi_norm = parse_nmi_norm(detect.nmi_norm);
  config.detect_seed = detect.detect_seed;
  return config;
}

int cmd_detect(const std::string& trace_path, const std::string& graph_path,
               const DetectFlags& detect, const SimParams& sim, const LayoutParams& layout,
               const std::string& mode, double radius, double epsilon,
               const std::string& out) {
  PipelineConfig config = assemble_config(detect, sim, layout, mode, radius, {epsilon});

  std::vector<Partition> partitions;
  const PartitionSink sink = [&partitions](std::size_t, const Partition& part) {
    partitions.push_back(part);
  };

  if (!graph_path.empty()) {
    if (config.mode != PipelineMode::Embedded) {
      throw std::runtime_error("detect: --graph input requires --mode embedded");
    }
    const TemporalProximityGraph graph = read_edges_csv(graph_path);
    std::vector<std::vector<NodeId>> activity;
    int node_count = graph.node_count;
    if (!trace_path.empty()) {
      const SimTrace trace = read_trace_csv(trace_path);
      node_count = std::max(node_count, trace.node_count);
      for (int t = 0; t <= trace.t_end(); ++t) activity.push_back(trace.active_nodes(t));
      activity.resize(graph.frames.size());
    } else {
      activity = activity_from_edges(graph);
    }
    const FrameSource source = make_embedded_source(graph, activity, config);
    detect_frames(node_count, graph.t_end(), source, nullptr, config, sink);
  } else {
    if (trace_path.empty()) {
      throw std::runtime_error("detect: need --trace (raw) or --graph (embedded) input");
    }
    const SimTrace trace = read_trace_csv(trace_path);
    run_pipeline_on_trace(trace, config, sink);
  }

  write_partitions_csv(partitions, out);
  std::cout << "wrote " << out << ": " << partitions.size() << " timestep partitions\n";
  return 0;
}

int cmd_evaluate(const std::string& partitions_path, const std::string& trace_path,
                 const std::string& norm, const std::string& out) {
  const std::vector<Partition> partitions = read_partitions_csv(partitions_path);
  if (partitions.empty()) throw std::runtime_error("evaluate: no partitions");
  const SimTrace trace = read_trace_csv(trace_path);
  const NmiNorm nmi_norm = parse_nmi_norm(norm);

  std::vector<double> values;
  values.reserve(partitions.size());
  for (const Partition& part : partitions) {
    if (part.t > trace.t_end()) {
      throw std::runtime_error("evaluate: partition timestep beyond the trace");
    }
    std::vector<std::int32_t> truth;
    truth.reserve(part.nodes.size());
    for (const NodeId id : part.nodes) {
      if (id >= trace.node_count || !trace.frames[part.t].active[id]) {
        throw std::runtime_error("evaluate: partition node " + std::to_string(id) +
                                 " not active at t = " + std::to_string(part.t));
      }
      truth.push_back(trace.group[id]);
    }
    values.push_back(nmi(part.labels, truth, nmi_norm));
  }
  write_nmi_csv(partitions.front().t, values, out);
  std::printf("mean NMI over t = %d..%d: %.6f\n", partitions.front().t,
              partitions.back().t, mean_nmi(values));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_sweep(const ScenarioFlags& scen, const SimParams& sim, const DetectFlags& detect,
              const LayoutParams& layout, const std::string& mode, double radius,
              const std::vector<double>& epsilons, const std::string& param,
              const std::vector<double>& values, int reps, const std::string& out) {
  SweepSpec spec;
  spec.base = assemble_config(detect, sim, layout, mode, radius, epsilons);
  spec.base.scenario = resolve_scenario(scen);
  spec.param = param;
  spec.values = values;
  spec.repetitions = reps;
  const std::vector<SweepRow> rows = run_sweep(spec);
  write_sweep_csv(rows, out);
  std::cout << "wrote " << out << ": " << rows.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lane formation toolkit: crowd simulation, proximity graphs, "
               "trajectory clustering and its evaluation"};
  app.require_subcommand(1);

  ScenarioFlags scen;
  SimParams sim;
  DetectFlags detect;
  LayoutParams layout;
  std::string mode = "raw";
  double radius = 25.0;
  double epsilon = 15.0;
  std::vector<double> epsilons;
  std::string trace_path, graph_path, partitions_path, out_path, param = "epsilon";
  std::vector<double> values;
  int reps = 5;
  std::uint64_t embed_seed = 1;
  std::string nmi_norm = "sqrt";

  const auto with_config = [](CLI::App* cmd) {
    cmd->set_config("--config", "", "key=value file; flags override it");
    return cmd;
  };

  CLI::App* simulate = with_config(app.add_subcommand("simulate", "run the crowd model"));
  add_scenario_flags(*simulate, scen);
  add_sim_flags(*simulate, sim);
  simulate->add_option("--out", out_path, "trace CSV path")->required();

  CLI::App* graph = with_config(
      app.add_subcommand("graph", "build the temporal proximity graph of a trace"));
  graph->add_option("--trace", trace_path, "trace CSV input")->required();
  graph->add_option("--radius", radius, "proximity radius")->capture_default_str();
  graph->add_option("--out", out_path, "edge CSV path")->required();

  CLI::App* embed = with_config(
      app.add_subcommand("embed", "compute force-directed layouts for a proximity graph"));
  embed->add_option("--graph", graph_path, "edge CSV input")->required();
  embed->add_option("--trace", trace_path,
                    "optional trace CSV supplying node activity spans");
  add_layout_flags(*embed, layout);
  embed->add_option("--seed", embed_seed, "layout seed")->capture_default_str();
  embed->add_option("--out", out_path, "layout CSV path")->required();

  CLI::App* det = with_config(app.add_subcommand("detect", "cluster walkers into lanes"));
  det->add_option("--trace", trace_path, "trace CSV (positions in raw mode, activity "
                                         "and ground truth otherwise)");
  det->add_option("--graph", graph_path, "edge CSV (embedded mode input)");
  det->add_option("--mode", mode, "raw or embedded")->capture_default_str();
  det->add_option("--radius", radius, "proximity radius for embedded mode")
      ->capture_default_str();
  det->add_option("--epsilon", epsilon, "clustering radius")->capture_default_str();
  add_detect_flags(*det, detect);
  add_sim_flags(*det, sim);
  add_layout_flags(*det, layout);
  det->add_option("--out", out_path, "partition CSV path")->required();

  CLI::App* evaluate = with_config(
      app.add_subcommand("evaluate", "score partitions against trace ground truth"));
  evaluate->add_option("--partitions", partitions_path, "partition CSV input")->required();
  evaluate->add_option("--trace", trace_path, "trace CSV with ground truth labels")
      ->required();
  evaluate->add_option("--nmi_norm", nmi_norm, "sqrt, max or mean")->capture_default_str();
  evaluate->add_option("--out", out_path, "per-timestep score CSV path")->required();

  CLI::App* sweep = with_config(app.add_subcommand("sweep", "parameter sweep harness"));
  add_scenario_flags(*sweep, scen);
  add_sim_flags(*sweep, sim);
  add_detect_flags(*sweep, detect);
  add_layout_flags(*sweep, layout);
  sweep->add_option("--mode", mode, "raw or embedded")->capture_default_str();
  sweep->add_option("--radius", radius, "proximity radius for embedded mode")
      ->capture_default_str();
  sweep->add_option("--epsilons", epsilons, "epsilon grid")->delimiter(',')->required();
  sweep->add_option("--param", param, "swept parameter name")->capture_default_str();
  sweep->add_option("--values", values, "swept values")->delimiter(',');
  sweep->add_option("--reps", reps, "repetitions per grid point")->capture_default_str();
  sweep->add_option("--out", out_path, "result CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(scen, sim, out_path);
    if (graph->parsed()) return cmd_graph(trace_path, radius, out_path);
    if (embed->parsed()) return cmd_embed(graph_path, trace_path, layout, embed_seed, out_path);
    if (det->parsed()) {
      return cmd_detect(trace_path, graph_path, detect, sim, layout, mode, radius, epsilon,
                        out_path);
    }
    if (evaluate->parsed()) return cmd_evaluate(partitions_path, trace_path, nmi_norm, out_path);
    if (sweep->parsed()) {
      return cmd_sweep(scen, sim, detect, layout, mode, radius, epsilons, param, values, reps,
                       out_path);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
