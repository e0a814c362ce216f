#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "news/compare.hpp"
#include "news/config.hpp"
#include "news/output.hpp"
#include "news/runner.hpp"

using namespace news;
namespace fs = std::filesystem;

namespace {

const fs::path kData = NEWS_DATA_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("news_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Frame uniform_frame(double t, int nx, int ny, double value) {
  Frame f;
  f.t = t;
  f.nx = nx;
  f.ny = ny;
  f.dx = 10.0;
  f.dy = 20.0;
  f.values.assign(static_cast<std::size_t>(nx * ny), value);
  return f;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in(R"(# scenario
network = town.net
schedule = town_day.sched
nx = 24
ny = 20
pad = 4
c_adv = 0.45
mode = strict
scheme = unsplit
horizon = 3600
exits = off
on_violation = clamp
boundary = wall
)");
  const auto c = parse_config(in, "/base");
  CHECK(c.network == fs::path("/base/town.net"));
  CHECK(c.schedule == fs::path("/base/town_day.sched"));
  CHECK(c.grid.cells_x == 24);
  CHECK(c.grid.pad == 4);
  CHECK(c.cfl.c_adv == 0.45);
  CHECK(c.mode == PositivityMode::Strict);
  CHECK(c.scheme == Scheme::Unsplit);
  CHECK(c.horizon == 3600.0);
  CHECK_FALSE(c.exits);
  CHECK(c.on_violation == ViolationPolicy::Clamp);
  CHECK(c.boundary == BoundaryMode::Wall);
  CHECK(c.effective_cfl().c_mix == kDefaultStrictMixingCfl);
}

TEST_CASE("config overrides and errors") {
  RunConfig c;
  apply_override(c, "spacing=250", "");
  CHECK(c.grid.spacing == 250.0);
  CHECK_FALSE(c.grid.cells_x);
  apply_override(c, "nx=10", "");
  CHECK_FALSE(c.grid.spacing);
  apply_override(c, "c_mix=0.3", "");
  CHECK_FALSE(c.effective_cfl().c_mix);  // non-strict drops it
  apply_override(c, "schedule=none", "");
  CHECK_FALSE(c.schedule);
  CHECK_THROWS_AS(apply_override(c, "nx", ""), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "colour=red", ""), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "pad=three", ""), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "mode=lenient", ""), ConfigError);
  std::istringstream broken("nx 12\n");
  CHECK_THROWS_AS(parse_config(broken, ""), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c = load_config(kData / "town.cfg");
  CHECK_NOTHROW(c.validate());
  c.horizon = 1000.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.horizon = 1800.0;
  c.network = kData / "missing.net";
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config round trip") {
  RunConfig c = load_config(kData / "town_strict.cfg");
  std::stringstream text;
  write_config(text, c);
  const auto again = parse_config(text, "");
  CHECK(again.network == c.network);
  CHECK(again.schedule == c.schedule);
  CHECK(again.mode == c.mode);
  CHECK(again.cfl.c_mix == c.cfl.c_mix);
  CHECK(again.grid.cells_y == c.grid.cells_y);
  CHECK(again.horizon == c.horizon);
}

TEST_CASE("frame round trip") {
  Grid g;
  g.nx = 3;
  g.ny = 2;
  g.dx = 5.0;
  g.dy = 7.0;
  DensityState s(g);
  s.t = 450.0;
  for (int j = 1; j <= 2; ++j)
    for (int i = 1; i <= 3; ++i)
      for (std::size_t x = 0; x < 4; ++x) s.rho[x](i, j) = 1e-5 * (i + 10 * j) / (x + 1.0) / 3.0;
  const Frame sum = make_frame(g, s, 4);
  CHECK(sum.at(2, 1) ==
        s.rho[0](3, 2) + s.rho[1](3, 2) + s.rho[2](3, 2) + s.rho[3](3, 2));
  std::stringstream text;
  write_frame(text, sum);
  const Frame back = read_frame(text);
  CHECK(back.t == 450.0);
  CHECK(back.nx == 3);
  CHECK(back.dy == 7.0);
  CHECK(back.values == sum.values);

  std::istringstream bad("0 2 2 1 1\n1,2\n");
  CHECK_THROWS_AS(read_frame(bad), ParseError);
  CHECK(frame_file_name(7, "sum") == "frame_0007_sum.csv");
}

TEST_CASE("summary round trip") {
  Summary s;
  s.set("status", "ok");
  s.set("dt_general", 14.0625);
  s.set("subcycles", 3);
  s.set("steps", 64L);
  std::stringstream text;
  write_summary(text, s);
  const auto back = read_summary(text);
  REQUIRE(back.get("dt_general"));
  CHECK(std::stod(*back.get("dt_general")) == 14.0625);
  CHECK(*back.get("subcycles") == "3");
  CHECK(back.entries().front().first == "status");
  CHECK(back.get("missing") == nullptr);
}

TEST_CASE("frame differences") {
  const Frame b = uniform_frame(900, 4, 3, 2.0);
  auto d = diff_stats("x", b, b);
  CHECK(d.linf == 0.0);
  CHECK(d.relative == 0.0);
  const Frame a = uniform_frame(900, 4, 3, 4.0);
  d = diff_stats("x", a, b);
  CHECK(d.relative == 0.5);
  CHECK(d.linf == 2.0);
  CHECK(d.l1 == doctest::Approx(2.0 * 12 * 200.0));
  CHECK(difference(a, b).values[5] == 2.0);
  CHECK(diff_stats("z", uniform_frame(0, 2, 2, 0.0), uniform_frame(0, 2, 2, 0.0)).relative == 0.0);
  CHECK(std::isinf(diff_stats("z", uniform_frame(0, 2, 2, 0.0), uniform_frame(0, 2, 2, 1.0)).relative));
  CHECK_THROWS_AS(difference(a, uniform_frame(900, 3, 4, 2.0)), ValidationError);
  CHECK_THROWS_AS(difference(a, uniform_frame(0, 4, 3, 2.0)), ValidationError);
}

TEST_CASE("zero schedule run and frame set comparison") {
  RunConfig c = load_config(kData / "town.cfg");
  c.schedule.reset();
  c.horizon = 900.0;
  c.cfl.dt_cap = 60.0;
  c.output = scratch("zero");
  const auto r = run(c);
  CHECK(r.samples.size() == 2);
  const auto frames = list_frames(c.output);
  CHECK(frames.size() == 10);
  for (const auto& p : frames) {
    const Frame f = read_frame(p);
    for (double v : f.values) CHECK(v == 0.0);
  }
  std::ifstream summary_file(c.output / "summary.txt");
  const auto summary = read_summary(summary_file);
  CHECK(*summary.get("status") == "ok");
  CHECK(summary.get("dt_io"));
  CHECK(fs::exists(c.output / "vehicles.csv"));
  CHECK(fs::exists(c.output / "config.txt"));

  const auto report = compare_frame_sets(c.output, c.output, scratch("zero_diff"));
  CHECK(report.frames.size() == 10);
  CHECK(report.max_relative == 0.0);
  CHECK(fs::exists(scratch("unused") / ".."));
}

TEST_CASE("the step arithmetic of a short run") {
  RunConfig c = load_config(kData / "town.cfg");
  c.schedule.reset();
  c.horizon = 900.0;
  c.cfl.dt_cap = 60.0;
  c.cfl.c_adv = 1.0;
  c.grid.cells_x = 2;
  c.grid.cells_y = 2;
  c.grid.pad = 1;
  const auto r = run_scenario(build_scenario(c), c.horizon, {});
  CHECK(r.plan.dt_general == 60.0);
  CHECK(r.steps == 15);
  CHECK(r.samples.size() == 2);
  CHECK(r.samples.back().t == 900.0);
}

TEST_CASE("failed runs flush their outputs") {
  RunConfig c = load_config(kData / "town.cfg");
  c.horizon = 1800.0;
  c.output = scratch("failing");
  Scenario sc = build_scenario(c);
  // A source far beyond what the cells can hold with an absurd step.
  sc.plan.dt_general *= 40.0;
  sc.plan.dt_io = sc.plan.dt_general;
  sc.plan.subcycles = 1;
  sc.plan.steps_per_output = 1;
  sc.plan.output_interval = sc.plan.dt_general;
  CHECK_THROWS_AS(run_scenario(sc, 20 * sc.plan.dt_general, c.output, &c), SimulationError);
  std::ifstream summary_file(c.output / "summary.txt");
  const auto summary = read_summary(summary_file);
  CHECK(*summary.get("status") == "failed");
  CHECK(summary.get("error"));
}
