#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "news/config.hpp"
#include "news/network.hpp"
#include "news/news_params.hpp"
#include "news/output.hpp"
#include "news/schedule.hpp"
#include "news/solver.hpp"

namespace news {

/// Everything compiled from a RunConfig before time stepping starts.
struct Scenario {
  StreetNetwork network;
  DemandSchedule schedule;
  std::vector<NewsIntersectionParams> params;
  Grid grid;
  GridFields fields;
  PointSources sources;
  StepPlan plan;
  SolverOptions options;
};

Scenario build_scenario(const RunConfig& config);

struct RunResult {
  StepPlan plan;
  Grid grid;
  Budget budget;
  EvalCounters counters;
  std::vector<VehicleSample> samples;  // one per output time, t = 0 first
  DensityState final_state;
  long steps = 0;
  long violations = 0;
  double wall_seconds = 0.0;
};

struct RunHooks {
  /// Called at t = 0 and after every output interval.
  std::function<void(const Simulation&, long output_index)> on_output;
};

/// Runs from an empty network at t = 0 up to `horizon`. With a nonempty
/// `output_dir`, frames, summary.txt, vehicles.csv and config.txt are
/// written there; on failure the partial outputs are flushed before the
/// error propagates.
RunResult run_scenario(const Scenario& scenario, double horizon,
                       const std::filesystem::path& output_dir, const RunConfig* config = nullptr,
                       const RunHooks& hooks = {});

/// build_scenario + run_scenario into config.output.
RunResult run(const RunConfig& config, const RunHooks& hooks = {});

}  // namespace news
