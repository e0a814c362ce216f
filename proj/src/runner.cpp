#include "news/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

namespace news {

Scenario build_scenario(const RunConfig& config) {
  config.validate();
  Scenario s{load_network(config.network), {}, {}, {}, {}, {}, {}, {}};
  if (config.schedule) s.schedule = load_schedule(*config.schedule, s.network);
  if (!config.exits) {
    std::vector<ScheduleSeries> kept;
    for (const auto& series : s.schedule.series())
      if (series.kind == FlowKind::Source) kept.push_back(series);
    s.schedule = DemandSchedule(s.schedule.minutes(), std::move(kept));
  }
  const ParamOptions popts{config.gamma, config.epsilon};
  s.params = compile_params(s.network, popts);
  s.grid = make_grid(s.network.bounding_box(), config.grid);
  s.fields = rasterize_parameters(s.network, s.params, s.grid, config.mu, config.gamma);
  const auto io = project_schedule(s.network, s.schedule, config.gamma);
  s.sources = rasterize_point_sources(s.network, io, s.grid, s.schedule.minutes());
  s.plan = plan_steps(s.grid, s.fields, s.sources, config.effective_cfl(), config.scheme,
                      config.epsilon);
  s.options = {config.mode, config.on_violation, config.boundary};
  return s;
}

namespace {

Summary make_summary(const RunResult& r, const Scenario& s, double horizon, bool ok,
                     const std::string& error) {
  Summary sum;
  sum.set("status", ok ? "ok" : "failed");
  if (!ok) sum.set("error", error);
  sum.set("scheme", to_string(s.plan.scheme));
  sum.set("mode", to_string(s.plan.mode));
  sum.set("grid_nx", s.grid.nx);
  sum.set("grid_ny", s.grid.ny);
  sum.set("dx", s.grid.dx);
  sum.set("dy", s.grid.dy);
  sum.set("pad", s.grid.pad);
  sum.set("ghost", s.grid.ghost);
  sum.set("dt_advection", s.plan.dt_advection);
  sum.set("dt_mixing", s.plan.dt_mixing);
  sum.set("dt_io_restriction", s.plan.dt_io_restriction);
  sum.set("binding", s.plan.binding);
  sum.set("dt_general", s.plan.dt_general);
  sum.set("dt_io", s.plan.dt_io);
  sum.set("subcycles", s.plan.subcycles);
  sum.set("steps_per_output", s.plan.steps_per_output);
  sum.set("output_interval", s.plan.output_interval);
  sum.set("horizon", horizon);
  sum.set("steps", r.steps);
  sum.set("wall_time", r.wall_seconds);
  sum.set("audit_violations", r.violations);
  sum.set("vehicles_final", r.samples.empty() ? 0.0 : r.samples.back().vehicles);
  sum.set("injected", r.budget.injected);
  sum.set("sunk", r.budget.sunk);
  sum.set("absorbed", r.budget.absorbed);
  sum.set("clamped", r.budget.clamped);
  sum.set("evaluations_demand_supply", r.counters.demand_supply);
  sum.set("evaluations_advection", r.counters.advection);
  sum.set("evaluations_mixing", r.counters.mixing);
  sum.set("evaluations_io", r.counters.io);
  sum.set("evaluations_total", r.counters.total());
  sum.set("vehicle_series", "vehicles.csv");
  return sum;
}

void flush(const std::filesystem::path& dir, const RunResult& r, const Scenario& s,
           double horizon, const RunConfig* config, bool ok, const std::string& error) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "summary.txt");
    write_summary(out, make_summary(r, s, horizon, ok, error));
  }
  {
    std::ofstream out(dir / "vehicles.csv");
    write_vehicle_series(out, r.samples);
  }
  if (config) {
    std::ofstream out(dir / "config.txt");
    write_config(out, *config);
  }
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, double horizon,
                       const std::filesystem::path& output_dir, const RunConfig* config,
                       const RunHooks& hooks) {
  const auto& plan = scenario.plan;
  const double outputs_real = horizon / plan.output_interval;
  const long outputs = std::lround(outputs_real);
  if (outputs < 1 || std::abs(outputs_real - static_cast<double>(outputs)) > 1e-9 * outputs_real)
    throw ConfigError("horizon must be a positive multiple of the output interval");

  if (!output_dir.empty() && std::filesystem::is_directory(output_dir))
    for (const auto& old : list_frames(output_dir)) std::filesystem::remove(old);

  const auto start = std::chrono::steady_clock::now();
  Simulation sim(scenario.grid, scenario.fields, scenario.sources, plan, scenario.options);
  RunResult r;
  r.plan = plan;
  r.grid = scenario.grid;

  auto record = [&](long index) {
    r.samples.push_back({sim.state().t, sim.vehicles(), sim.budget().injected,
                         sim.budget().sunk, sim.budget().absorbed});
    if (!output_dir.empty()) write_frames(output_dir, index, scenario.grid, sim.state());
    if (hooks.on_output) hooks.on_output(sim, index);
  };
  auto collect = [&] {
    r.budget = sim.budget();
    r.counters = sim.counters();
    r.steps = sim.steps_taken();
    r.violations = sim.violations();
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    record(0);
    for (long k = 1; k <= outputs; ++k) {
      sim.advance(plan.steps_per_output);
      record(k);
    }
  } catch (const Error& e) {
    collect();
    r.final_state = sim.state();
    if (!output_dir.empty()) flush(output_dir, r, scenario, horizon, config, false, e.what());
    throw;
  }
  collect();
  r.final_state = sim.state();
  if (!output_dir.empty()) flush(output_dir, r, scenario, horizon, config, true, {});
  return r;
}

RunResult run(const RunConfig& config, const RunHooks& hooks) {
  const Scenario scenario = build_scenario(config);
  return run_scenario(scenario, config.horizon, config.output, &config, hooks);
}

}  // namespace news
