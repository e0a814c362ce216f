#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "news/fundamental_diagram.hpp"
#include "news/solver.hpp"

using namespace news;

namespace {

constexpr std::size_t N = 0, E = 1, W = 2, S = 3;
constexpr double kV = 10.0;
constexpr double kRhoMax = 1.0 / 6.0 / 400.0;  // one lane per 20 m cell
constexpr double kL = 50.0;

const FdParams kFd{kV, kRhoMax, 1.0 / 3.0};

StepPlan plan_with(double dt, int subcycles = 1, Scheme scheme = Scheme::Split) {
  StepPlan p;
  p.dt_general = dt;
  p.subcycles = subcycles;
  p.dt_io = dt / subcycles;
  p.steps_per_output = 1000;
  p.scheme = scheme;
  return p;
}

PointSources source_at(int i, int j, std::size_t x, double demand, double supply = 0.0) {
  PointSources ps;
  SourceCell c;
  c.i = i;
  c.j = j;
  PerCardinal<double> d{}, s{};
  d[x] = demand;
  s[x] = supply;
  c.demand.assign(1, d);
  c.supply.assign(1, s);
  ps.cells.push_back(c);
  return ps;
}

// A 6 x 5 grid with diagonal transport and random turning.
struct Mixed {
  Grid grid = fixtures::square_grid(6, 5, 20.0);
  GridFields fields = fixtures::uniform_fields(grid, kV, kRhoMax, kL);
  DensityState state{grid};

  Mixed() {
    fixtures::set_trig(fields, Cardinal::N, 0.3, 0.9);
    fixtures::set_trig(fields, Cardinal::E, 0.95, -0.2);
    fixtures::set_trig(fields, Cardinal::W, -0.8, 0.5);
    fixtures::set_trig(fields, Cardinal::S, 0.1, -0.99);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) {
        fields.alpha[x][y].fill(x == y ? 0.4 : 0.2);
        fields.beta[x][y].fill(0.25);
      }
    for (int j = 1; j <= grid.ny; ++j)
      for (int i = 1; i <= grid.nx; ++i)
        for (auto& f : state.rho) f(i, j) = 0.2 * kRhoMax * u(rng);
  }
};

bool ghosts_zero(const Grid& g, const DensityState& s) {
  for (const auto& f : s.rho)
    for (int j = 0; j < g.total_ny(); ++j)
      for (int i = 0; i < g.total_nx(); ++i)
        if (!g.is_interior(i, j) && f(i, j) != 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("cell demand and supply") {
  const Grid g = fixtures::square_grid(3, 3, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  auto ds = cell_demand_supply(s, f);
  CHECK(ds.demand[E](2, 2) == 0.0);
  CHECK(ds.supply[E](2, 2) == kFd.phi_max());
  s.rho[E](2, 2) = kRhoMax;
  s.rho[N](1, 1) = kFd.rho_crit() / 2;
  ds = cell_demand_supply(s, f);
  CHECK(ds.demand[E](2, 2) == kFd.phi_max());
  CHECK(ds.supply[E](2, 2) == 0.0);
  CHECK(ds.demand[N](1, 1) == doctest::Approx(kV * kFd.rho_crit() / 2));
  CHECK(ds.supply[N](1, 1) == kFd.phi_max());
}

TEST_CASE("Godunov face fluxes") {
  const Grid g = fixtures::square_grid(2, 1, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  auto faces = face_fluxes(cell_demand_supply(s, f), g);
  CHECK(faces.right[E](1, 1) == 0.0);
  CHECK(faces.left[E](1, 1) == 0.0);

  s.rho[E](1, 1) = kFd.rho_crit();
  faces = face_fluxes(cell_demand_supply(s, f), g);
  CHECK(faces.right[E](1, 1) == doctest::Approx(kFd.phi_max()));

  s.rho[E](1, 1) = 0.0;
  s.rho[E](2, 1) = kRhoMax;
  faces = face_fluxes(cell_demand_supply(s, f), g);
  CHECK(faces.right[E](1, 1) == 0.0);
  CHECK(faces.left[E](1, 1) == doctest::Approx(kFd.phi_max()));

  // Walls shut the faces towards the ghost layer only.
  s.rho[E](1, 1) = kFd.rho_crit();
  faces = face_fluxes(cell_demand_supply(s, f), g, BoundaryMode::Wall);
  CHECK(faces.left[E](0, 1) == 0.0);
  CHECK(faces.right[E](2, 1) == 0.0);
  CHECK(faces.left[E](1, 1) > 0.0);
}

TEST_CASE("advection of a uniform state") {
  const Grid g = fixtures::square_grid(6, 6, 20.0);
  auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  fixtures::set_trig(f, Cardinal::N, 0.4, 0.7);
  DensityState s(g);
  for (int j = 1; j <= 6; ++j)
    for (int i = 1; i <= 6; ++i) s.rho[N](i, j) = 0.3 * kRhoMax;
  const auto adv = advective_update(face_fluxes(cell_demand_supply(s, f), g), f, g);
  for (int j = 2; j <= 5; ++j)
    for (int i = 2; i <= 5; ++i) CHECK(adv[N](i, j) == doctest::Approx(0.0).epsilon(1e-18));
  for (int j = 0; j < g.total_ny(); ++j) CHECK(adv[N](0, j) == 0.0);

  // Without an x component the vertical faces carry nothing.
  fixtures::set_trig(f, Cardinal::N, 0.0, 1.0);
  s.rho[N](3, 3) = 0.9 * kRhoMax;
  const auto faces = face_fluxes(cell_demand_supply(s, f), g);
  const auto only_y = advective_update(faces, f, g);
  // Column 3 exchanges with rows above and below only; neighbors left and
  // right see the same as before.
  CHECK(only_y[N](2, 3) == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(only_y[N](4, 3) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("advection matches a scalar Godunov step on a road") {
  const Grid g = fixtures::square_grid(50, 1, 20.0);
  auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  fixtures::set_trig(f, Cardinal::E, 1.0, 0.0);
  DensityState s(g);
  for (int i = 1; i <= 50; ++i) s.rho[E](i, 1) = i <= 25 ? 0.8 * kRhoMax : 0.1 * kRhoMax;
  const double dt = 1.0;
  const auto next = step_split(s, g, f, PointSources{}, plan_with(dt));
  auto flux_at = [&](int i) {  // between storage cells i and i + 1
    const double d = demand(s.rho[E](i, 1), kFd);
    const double sup = supply(s.rho[E](i + 1, 1), kFd);
    return std::min(d, sup);
  };
  for (int i = 1; i <= 50; ++i) {
    const double expected = s.rho[E](i, 1) - dt / 20.0 * (flux_at(i) - flux_at(i - 1));
    CHECK(next.rho[E](i, 1) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mixing") {
  const Grid g = fixtures::square_grid(1, 1, 20.0);
  auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  s.rho[E](1, 1) = kFd.rho_crit();
  // Only diagonal turning: nothing changes direction.
  for (std::size_t x = 0; x < 4; ++x) {
    f.alpha[x][x].fill(1.0);
    f.beta[x][x].fill(1.0);
  }
  auto mix = mixing_update(cell_demand_supply(s, f), f, g);
  for (std::size_t x = 0; x < 4; ++x) CHECK(mix[x](1, 1) == 0.0);

  f.alpha[E][E].fill(0.0);
  f.alpha[E][N].fill(1.0);
  f.beta[E][N].fill(0.5);
  mix = mixing_update(cell_demand_supply(s, f), f, g);
  const double phi = std::min(kFd.phi_max(), 0.5 * kFd.phi_max());
  CHECK(mix[N](1, 1) == doctest::Approx(phi / kL));
  CHECK(mix[E](1, 1) == doctest::Approx(-phi / kL));
  CHECK(mix[N](1, 1) + mix[E](1, 1) + mix[W](1, 1) + mix[S](1, 1) == 0.0);
}

TEST_CASE("mixing conserves the summed density") {
  Mixed m;
  const auto mix = mixing_update(cell_demand_supply(m.state, m.fields), m.fields, m.grid);
  for (int j = 1; j <= m.grid.ny; ++j)
    for (int i = 1; i <= m.grid.nx; ++i)
      CHECK(std::abs(mix[N](i, j) + mix[E](i, j) + mix[W](i, j) + mix[S](i, j)) * kL <=
            1e-12 * kFd.phi_max());
}

TEST_CASE("inflow and outflow") {
  const Grid g = fixtures::square_grid(1, 1, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  const double d = 0.5 * kFd.phi_max();
  auto io = io_update(cell_demand_supply(s, f), source_at(1, 1, E, d, 1.0), 0);
  CHECK(io[0].source[E] == d);
  CHECK(io[0].sink[E] == 0.0);
  s.rho[E](1, 1) = kRhoMax;
  io = io_update(cell_demand_supply(s, f), source_at(1, 1, E, d, 1.0), 0);
  CHECK(io[0].source[E] == 0.0);
  CHECK(io[0].sink[E] == kFd.phi_max());
  // Minutes past the end reuse the last one.
  io = io_update(cell_demand_supply(s, f), source_at(1, 1, E, d, 1.0), 99);
  CHECK(io[0].sink[E] == kFd.phi_max());
}

TEST_CASE("unsplit steps") {
  const Grid g = fixtures::square_grid(3, 3, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  const auto plan = plan_with(2.0, 1, Scheme::Unsplit);
  auto next = step_unsplit(s, g, f, PointSources{}, plan);
  for (const auto& r : next.rho)
    for (double v : r.data()) CHECK(v == 0.0);
  CHECK(next.t == 2.0);

  const double d = 0.1 * kFd.phi_max();
  next = step_unsplit(s, g, f, source_at(2, 2, W, d), plan);
  CHECK(next.rho[W](2, 2) == doctest::Approx(2.0 * d / kL));
  CHECK(next.rho[W](1, 1) == 0.0);
}

TEST_CASE("split equals unsplit without boundary flows") {
  Mixed m;
  const auto a = step_split(m.state, m.grid, m.fields, PointSources{}, plan_with(0.5, 3));
  const auto b = step_unsplit(m.state, m.grid, m.fields, PointSources{}, plan_with(0.5));
  for (std::size_t x = 0; x < 4; ++x) CHECK(a.rho[x] == b.rho[x]);
}

TEST_CASE("one subcycle without transport equals the unsplit io step") {
  const Grid g = fixtures::square_grid(3, 3, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  s.rho[S](2, 2) = 0.4 * kRhoMax;
  const auto ps = source_at(2, 2, S, 0.3 * kFd.phi_max(), 0.2 * kFd.phi_max());
  const auto a = step_split(s, g, f, ps, plan_with(1.5));
  const auto b = step_unsplit(s, g, f, ps, plan_with(1.5));
  for (std::size_t x = 0; x < 4; ++x) CHECK(a.rho[x] == b.rho[x]);
}

TEST_CASE("subcycles refresh supply") {
  const Grid g = fixtures::square_grid(1, 1, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  s.rho[E](1, 1) = 0.95 * kRhoMax;
  // Demand larger than what fits: a single large step would overfill.
  const auto ps = source_at(1, 1, E, kFd.phi_max());
  Simulation sim(g, f, ps, plan_with(3.0, 3));
  sim.set_state(s);
  sim.step();
  const double after = sim.state().rho[E](1, 1);
  // Reference: three explicit io steps of one second each.
  double r = 0.95 * kRhoMax;
  for (int k = 0; k < 3; ++k) r += 1.0 * std::min(kFd.phi_max(), supply(r, kFd)) / kL;
  CHECK(after == doctest::Approx(r).epsilon(1e-14));
  CHECK(sim.counters().io == 3);
  CHECK(sim.counters().demand_supply == 4);
  CHECK(sim.counters().advection == 1);
}

TEST_CASE("ghosts stay empty and the budget closes") {
  Mixed m;
  auto ps = source_at(2, 2, N, 0.3 * kFd.phi_max());
  auto sink = source_at(5, 4, E, 0.0, 0.4 * kFd.phi_max()).cells[0];
  ps.cells.push_back(sink);
  for (auto boundary : {BoundaryMode::Absorbing, BoundaryMode::Wall}) {
    for (int k : {1, 2}) {
      SolverOptions opts;
      opts.boundary = boundary;
      Simulation sim(m.grid, m.fields, ps, plan_with(0.5, k), opts);
      sim.set_state(m.state);
      const double v0 = sim.vehicles();
      for (int n = 0; n < 40; ++n) {
        sim.step();
        CHECK(ghosts_zero(m.grid, sim.state()));
      }
      const auto& b = sim.budget();
      const double expected = v0 + b.injected - b.sunk - b.absorbed;
      CHECK(sim.vehicles() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(b.injected > 0.0);
      CHECK(b.sunk > 0.0);
      if (boundary == BoundaryMode::Wall)
        CHECK(b.absorbed == 0.0);
      else
        CHECK(b.absorbed > 0.0);
    }
  }
}

TEST_CASE("one step changes the vehicle count by the boundary flows") {
  const Grid g = fixtures::square_grid(4, 4, 20.0);
  auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  s.rho[N](2, 2) = 0.5 * kRhoMax;
  auto ps = source_at(3, 3, E, 0.2 * kFd.phi_max());
  ps.cells.push_back(source_at(2, 2, N, 0.0, 0.1 * kFd.phi_max()).cells[0]);
  const double dt = 0.7;
  Simulation sim(g, f, ps, plan_with(dt, 1, Scheme::Unsplit));
  sim.set_state(s);
  const double before = sim.vehicles();
  sim.step();
  const double area = g.cell_area();
  const double in = dt * 0.2 * kFd.phi_max() / kL * area;
  const double out = dt * 0.1 * kFd.phi_max() / kL * area;
  CHECK(sim.vehicles() - before == doctest::Approx(in - out).epsilon(1e-10));
}

TEST_CASE("clock follows whole output intervals") {
  const Grid g = fixtures::square_grid(2, 2, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  StepPlan p = plan_with(900.0 / 64);
  p.steps_per_output = 64;
  Simulation sim(g, f, PointSources{}, p);
  sim.advance(64 * 3 + 5);
  CHECK(sim.state().t == 2700.0 + 5 * (900.0 / 64));
  CHECK(sim.steps_taken() == 197);
}

TEST_CASE("bound violations") {
  const Grid g = fixtures::square_grid(3, 3, 20.0);
  const auto f = fixtures::uniform_fields(g, kV, kRhoMax, kL);
  DensityState s(g);
  s.rho[W](2, 3) = 5.0 * kRhoMax;
  SUBCASE("fail names the cell") {
    Simulation sim(g, f, PointSources{}, plan_with(1.0));
    sim.set_state(s);
    try {
      sim.step();
      FAIL("expected a simulation error");
    } catch (const SimulationError& e) {
      CHECK(std::string(e.what()).find("(2, 3)") != std::string::npos);
    }
  }
  SUBCASE("clamp keeps going") {
    SolverOptions opts;
    opts.on_violation = ViolationPolicy::Clamp;
    Simulation sim(g, f, PointSources{}, plan_with(1.0), opts);
    sim.set_state(s);
    sim.step();
    CHECK(sim.violations() == 1);
    CHECK(sim.budget().clamped < 0.0);
    double sum = 0.0;
    for (const auto& r : sim.state().rho) sum += r(2, 3);
    CHECK(sum <= 4 * kRhoMax * (1 + 1e-12));
  }
  SUBCASE("strict mode rejects negative partial densities") {
    DensityState neg(g);
    neg.rho[N](2, 2) = -0.01 * kRhoMax;
    neg.rho[E](2, 2) = 0.5 * kRhoMax;
    SolverOptions strict;
    strict.mode = PositivityMode::Strict;
    Simulation sim(g, f, PointSources{}, plan_with(1.0), strict);
    sim.set_state(neg);
    CHECK_THROWS_AS(sim.step(), SimulationError);
    Simulation lax(g, f, PointSources{}, plan_with(1.0));
    lax.set_state(neg);
    CHECK_NOTHROW(lax.step());
  }
}
