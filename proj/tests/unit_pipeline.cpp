#include "lanedet/pipeline.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace lanedet;

namespace {

// Two rigid squads marching apart: a perfectly separable toy world where
// within-squad score-C distances are 0 + spacing and between-squad scores
// explode with the horizon.
SimTrace marching_squads(int steps) {
  SimTrace trace;
  trace.node_count = 8;
  trace.group = {0, 0, 0, 0, 1, 1, 1, 1};
  for (int t = 0; t <= steps; ++t) {
    TraceFrame frame;
    frame.active.assign(8, 1);
    for (int m = 0; m < 4; ++m) {
      frame.pos.push_back(GridPoint(t + (m % 2), 10 + 2 * (m / 2)));       // heading east
    }
    for (int m = 0; m < 4; ++m) {
      frame.pos.push_back(GridPoint(40 - t + (m % 2), 10 + 2 * (m / 2)));  // heading west
    }
    trace.frames.push_back(std::move(frame));
  }
  return trace;
}

PipelineConfig toy_config() {
  PipelineConfig config;
  config.similarity.kind = ScoreKind::C;
  config.similarity.window = 10;
  config.similarity.horizon = 10;
  config.min_pts = 2;
  config.epsilons = {8.0};
  config.sim.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("squads that stay rigid and diverge are recovered exactly") {
  const SimTrace trace = marching_squads(30);
  const PipelineConfig config = toy_config();

  std::vector<Partition> seen;
  const PipelineResult result = run_pipeline_on_trace(
      trace, config, [&](std::size_t, const Partition& p) { seen.push_back(p); });

  CHECK(result.first_scored_t == 10);
  CHECK(result.last_scored_t == 30);
  REQUIRE(result.nmi_series.size() == 1);
  REQUIRE(result.nmi_series[0].size() == 21);  // t = 10..30 inclusive
  // Within a squad, score C = current distance <= sqrt(5) < 8. Across
  // squads the velocity gap is 2 per step, so 10 * 2 = 20 > 8: two clean
  // clusters matching the ground truth at every scored timestep.
  for (const double v : result.nmi_series[0]) CHECK(v == doctest::Approx(1.0));
  CHECK(result.mean_nmi[0] == doctest::Approx(1.0));
  REQUIRE(seen.size() == 21);
  CHECK(seen.front().t == 10);
  CHECK(seen.front().core_cluster_count == 2);
  CHECK(seen.front().nodes == std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("runs end-to-end reproducibly from a scenario") {
  PipelineConfig config;
  config.scenario.region = 24.0;
  config.scenario.width = 6.0;
  config.sim.density = 0.25;
  config.sim.max_timesteps = 60;
  config.sim.seed = 9;
  config.similarity.window = 30;
  config.similarity.horizon = 30;
  config.min_pts = 4;
  config.epsilons = {6.0, 12.0};

  const PipelineResult a = run_pipeline(config);
  const PipelineResult b = run_pipeline(config);
  REQUIRE(a.epsilons == b.epsilons);
  REQUIRE(a.nmi_series.size() == 2);
  CHECK(a.first_scored_t == 30);
  CHECK(a.last_scored_t == 60);
  for (std::size_t e = 0; e < 2; ++e) {
    REQUIRE(a.nmi_series[e].size() == b.nmi_series[e].size());
    for (std::size_t i = 0; i < a.nmi_series[e].size(); ++i) {
      CHECK(a.nmi_series[e][i] == b.nmi_series[e][i]);  // bitwise
    }
    CHECK(a.mean_nmi[e] == b.mean_nmi[e]);
    CHECK(std::isfinite(a.mean_nmi[e]));
  }

  // A different clustering seed may reorder ties but must stay in range.
  PipelineConfig reseeded = config;
  reseeded.detect_seed = 123;
  const PipelineResult c = run_pipeline(reseeded);
  for (const double v : c.mean_nmi) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("a run shorter than the window scores nothing") {
  const SimTrace trace = marching_squads(5);  // window is 10
  const PipelineResult result = run_pipeline_on_trace(trace, toy_config());
  CHECK(result.nmi_series[0].empty());
  CHECK(std::isnan(result.mean_nmi[0]));
}

TEST_CASE("nodes missing part of the window sit out until it refills") {
  SimTrace trace = marching_squads(20);
  // Node 3 blinks off at t = 12: it lacks a full window until t = 23.
  trace.frames[12].active[3] = 0;
  PipelineConfig config = toy_config();

  std::vector<int> sizes;
  run_pipeline_on_trace(trace, config, [&](std::size_t, const Partition& p) {
    sizes.push_back(static_cast<int>(p.nodes.size()));
  });
  REQUIRE(sizes.size() == 11);  // t = 10..20
  CHECK(sizes[0] == 8);
  CHECK(sizes[1] == 8);
  for (int i = 2; i <= 10; ++i) CHECK(sizes[i] == 7);  // t = 12..20 without node 3
}

TEST_CASE("embedded mode scores the same squads through the graph alone") {
  // 14 steps: the squads stop well before their paths would cross, so the
  // proximity graph is two disjoint cliques at every timestep.
  const SimTrace trace = marching_squads(14);
  PipelineConfig config = toy_config();
  config.mode = PipelineMode::Embedded;
  config.detection_radius = 4.0;  // squads stay internally connected
  config.epsilons = {25.0};
  config.similarity.horizon = 40;

  const PipelineResult result = run_pipeline_on_trace(trace, config);
  REQUIRE(result.nmi_series.size() == 1);
  REQUIRE_FALSE(result.nmi_series[0].empty());
  // Disjoint components repel each other in the layout, so the squads sit
  // far apart there whatever their spatial distance.
  CHECK(result.mean_nmi[0] >= 0.8);

  const PipelineResult again = run_pipeline_on_trace(trace, config);
  for (std::size_t i = 0; i < result.nmi_series[0].size(); ++i) {
    CHECK(result.nmi_series[0][i] == again.nmi_series[0][i]);
  }
}

TEST_CASE("graph-only input infers activity from edge incidence") {
  const SimTrace trace = marching_squads(14);
  const TemporalProximityGraph graph = build_proximity_graph(trace, 4.0);
  const auto activity = activity_from_edges(graph);
  REQUIRE(activity.size() == graph.frames.size());
  // Every node keeps an in-squad edge at all times here.
  for (const auto& ids : activity) CHECK(ids.size() == 8);

  // A node with edges only in the middle is active only there.
  TemporalProximityGraph sparse;
  sparse.node_count = 3;
  sparse.frames.resize(5);
  sparse.frames[1].push_back({0, 1});
  sparse.frames[3].push_back({1, 2});
  const auto spans = activity_from_edges(sparse);
  CHECK(spans[0].empty());
  CHECK(spans[1] == std::vector<NodeId>{0, 1});
  CHECK(spans[2] == std::vector<NodeId>{1});  // only node 1 spans the gap
  CHECK(spans[3] == std::vector<NodeId>{1, 2});
  CHECK(spans[4].empty());

  PipelineConfig config = toy_config();
  config.mode = PipelineMode::Embedded;
  config.epsilons = {25.0};
  config.similarity.horizon = 40;
  const auto source = make_embedded_source(graph, activity, config);
  const PipelineResult result =
      detect_frames(graph.node_count, graph.t_end(), source, &trace.group, config);
  CHECK(result.mean_nmi[0] >= 0.8);
}

TEST_CASE("epsilon sweep emits one row per value, rep and epsilon") {
  SweepSpec spec;
  spec.base.scenario.region = 20.0;
  spec.base.scenario.width = 5.0;
  spec.base.sim.density = 0.2;
  spec.base.sim.max_timesteps = 30;
  spec.base.similarity.window = 15;
  spec.base.similarity.horizon = 15;
  spec.base.min_pts = 3;
  spec.base.epsilons = {5.0, 10.0};
  spec.param = "epsilon";
  spec.repetitions = 2;

  const std::vector<SweepRow> rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);  // 2 reps x 2 epsilons
  CHECK(rows[0].scenario == "straight");
  CHECK(rows[0].param == "epsilon");
  // Stable order: (value, rep, epsilon); for epsilon sweeps value = epsilon.
  CHECK(rows[0].epsilon == 5.0);
  CHECK(rows[0].rep == 0);
  CHECK(rows[1].epsilon == 5.0);
  CHECK(rows[1].rep == 1);
  CHECK(rows[2].epsilon == 10.0);
  CHECK(rows[2].rep == 0);
  CHECK(rows[3].rep == 1);
  for (const SweepRow& row : rows) {
    CHECK(row.value == row.epsilon);  // epsilon sweeps report epsilon itself
    CHECK((std::isnan(row.mean_nmi) || (row.mean_nmi >= 0.0 && row.mean_nmi <= 1.0)));
  }

  // Determinism: identical spec, identical table.
  const std::vector<SweepRow> again = run_sweep(spec);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].value == rows[i].value);
    CHECK(again[i].rep == rows[i].rep);
    CHECK(again[i].epsilon == rows[i].epsilon);
    CHECK(again[i].mean_nmi == rows[i].mean_nmi);
  }
}

TEST_CASE("parameter sweeps vary the named knob") {
  SweepSpec spec;
  spec.base.scenario.region = 20.0;
  spec.base.scenario.width = 5.0;
  spec.base.sim.density = 0.2;
  spec.base.sim.max_timesteps = 25;
  spec.base.similarity.window = 12;
  spec.base.similarity.horizon = 12;
  spec.base.min_pts = 3;
  spec.base.epsilons = {6.0};
  spec.param = "min_pts";
  spec.values = {2.0, 5.0};
  spec.repetitions = 2;

  const std::vector<SweepRow> rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);  // 2 values x 2 reps x 1 epsilon
  CHECK(rows[0].value == 2.0);
  CHECK(rows[0].rep == 0);
  CHECK(rows[1].value == 2.0);
  CHECK(rows[1].rep == 1);
  CHECK(rows[2].value == 5.0);
  CHECK(rows[3].value == 5.0);

  SweepSpec bad = spec;
  bad.param = "gravity";
  CHECK_THROWS_AS(run_sweep(bad), std::exception);
  SweepSpec empty = spec;
  empty.values.clear();
  CHECK_THROWS_AS(run_sweep(empty), std::exception);
}

TEST_CASE("sweep CSV is stable byte for byte") {
  std::vector<SweepRow> rows{{"straight", "epsilon", 5.0, 5.0, 0, 0.875},
                             {"straight", "epsilon", 10.0, 10.0, 0, 1.0}};
  std::stringstream first, second;
  write_sweep_csv(rows, first);
  write_sweep_csv(rows, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().substr(0, first.str().find('\n')) ==
        "scenario,param,value,epsilon,rep,mean_nmi");
  CHECK(first.str().find("0.875") != std::string::npos);
}

TEST_CASE("partition CSV round-trips labels") {
  Partition part;
  part.t = 7;
  part.nodes = {0, 2, 5};
  part.labels = {1, 1, 0};
  part.core_cluster_count = 2;
  std::stringstream buffer;
  write_partitions_csv({part}, buffer);
  const std::vector<Partition> back = read_partitions_csv(buffer);
  REQUIRE(back.size() == 1);
  CHECK(back[0].t == 7);
  CHECK(back[0].nodes == part.nodes);
  CHECK(back[0].labels == part.labels);
}

TEST_CASE("nmi CSV lists timesteps then the mean") {
  std::stringstream out;
  write_nmi_csv(10, {1.0, 0.5}, out);
  const std::string text = out.str();
  CHECK(text.find("t,nmi\n") == 0);
  CHECK(text.find("10,1") != std::string::npos);
  CHECK(text.find("11,0.5") != std::string::npos);
  CHECK(text.find("mean,0.75") != std::string::npos);
}
