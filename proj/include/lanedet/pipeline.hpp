#pragma once

#include "lanedet/clustering.hpp"
#include "lanedet/embedding.hpp"
#include "lanedet/evaluation.hpp"
#include "lanedet/proximity.hpp"
#include "lanedet/scenario.hpp"
#include "lanedet/similarity.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace lanedet {

// Raw feeds walker coordinates straight into the scores; Embedded replaces
// them with force-directed layout coordinates computed from the proximity
// graph, which is then the only geometric input.
enum class PipelineMode { Raw, Embedded };

PipelineMode parse_pipeline_mode(const std::string& s);
std::string to_string(PipelineMode mode);

struct PipelineConfig {
  ScenarioSpec scenario;
  SimParams sim;
  SimilarityParams similarity;
  int min_pts = 15;
  bool count_self = false;
  std::vector<double> epsilons;
  PipelineMode mode = PipelineMode::Raw;
  double detection_radius = 25.0;  // proximity radius for the embedded mode
  LayoutParams layout;
  NmiNorm nmi_norm = NmiNorm::Sqrt;
  // Seed for the clustering orders (and embedded layout); 0 derives one
  // from sim.seed.
  std::uint64_t detect_seed = 0;

  void validate() const;
};

struct PipelineResult {
  int first_scored_t = 0;  // == similarity window
  int last_scored_t = -1;  // == final trace timestep
  std::vector<double> epsilons;
  // nmi_series[e][t - first_scored_t]; empty when the run ended before the
  // window filled.
  std::vector<std::vector<double>> nmi_series;
  std::vector<double> mean_nmi;  // per epsilon; NaN when nothing was scored
};

// Receives each detected partition, keyed by position in `epsilons`.
using PartitionSink = std::function<void(std::size_t eps_index, const Partition&)>;

// Produces (ids, positions) of the nodes present at timestep t; ids
// ascending.
using FrameSource =
    std::function<void(int t, std::vector<NodeId>& ids, std::vector<Vec2>& positions)>;

// Core detection loop: feed frames into the position window, then for each
// timestep from `window` on cluster the nodes holding a full window, once
// per epsilon. With `groups` (per-node ground truth) each partition is
// scored against it. Range queries run on a spatial grid, which is exact
// for the window scores.
PipelineResult detect_frames(int node_count, int t_end, const FrameSource& source,
                             const std::vector<int>* groups, const PipelineConfig& config,
                             const PartitionSink& sink = nullptr);

// The returned closures hold references to the trace / graph / activity
// arguments, which must outlive the source.
FrameSource make_raw_source(const SimTrace& trace);
// Builds proximity edges per frame and maintains the warm-started layout.
FrameSource make_embedded_source(const SimTrace& trace, const PipelineConfig& config);
FrameSource make_embedded_source(const TemporalProximityGraph& graph,
                                 const std::vector<std::vector<NodeId>>& activity,
                                 const PipelineConfig& config);

// Fallback activity for graph-only input: a node counts as present from
// the first to the last timestep where it carries an edge.
std::vector<std::vector<NodeId>> activity_from_edges(const TemporalProximityGraph& graph);

PipelineResult run_pipeline_on_trace(const SimTrace& trace, const PipelineConfig& config,
                                     const PartitionSink& sink = nullptr);
// Simulates the configured scenario first, then detects on the trace.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const PartitionSink& sink = nullptr);

// --- experiment harness -------------------------------------------------

struct SweepSpec {
  PipelineConfig base;
  // One of: epsilon, width, separation, amplitude, wavelength, region, p,
  // q, density, window, horizon, min_pts, radius. "epsilon" sweeps the
  // epsilon grid alone and ignores `values`.
  std::string param = "epsilon";
  std::vector<double> values;
  int repetitions = 5;

  void validate() const;
};

struct SweepRow {
  std::string scenario;
  std::string param;
  double value = 0.0;
  double epsilon = 0.0;
  int rep = 0;
  double mean_nmi = 0.0;
};

// Runs repetitions x values x epsilon grid. Repetition r of every grid
// value shares one simulation seed, and parameters that leave the
// simulation untouched reuse its trace outright.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV layout: header "scenario,param,value,epsilon,rep,mean_nmi".
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Partition CSV layout: header "t,node_id,cluster_label", sorted by
// (t, node_id). Reading recovers labels only (not core/noise status).
void write_partitions_csv(const std::vector<Partition>& partitions, std::ostream& out);
void write_partitions_csv(const std::vector<Partition>& partitions, const std::string& path);
std::vector<Partition> read_partitions_csv(std::istream& in);
std::vector<Partition> read_partitions_csv(const std::string& path);

// Score CSV layout: "t,nmi" rows followed by a "mean,<value>" summary.
void write_nmi_csv(int first_t, const std::vector<double>& values, std::ostream& out);
void write_nmi_csv(int first_t, const std::vector<double>& values, const std::string& path);

}  // namespace lanedet
