#include "news/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "news/fundamental_diagram.hpp"

namespace news {

namespace {

// Audit slack relative to the local jam density; covers rounding only.
constexpr double kAuditTolerance = 1e-12;

void ensure_shape(PerCardinal<Field2D>& f, int nx, int ny) {
  for (auto& c : f)
    if (c.nx() != nx || c.ny() != ny) c = Field2D(nx, ny);
}

FdParams cell_fd(const GridFields& fields, std::size_t x, int i, int j) {
  return {fields.v_max[x](i, j), fields.rho_max[x](i, j), fields.gamma};
}

}  // namespace

DensityState::DensityState(const Grid& grid) {
  for (auto& f : rho) f = Field2D(grid.total_nx(), grid.total_ny());
}

void cell_demand_supply_into(const DensityState& state, const GridFields& fields,
                             CellDemandSupply& out) {
  const int tx = state.rho[0].nx();
  const int ty = state.rho[0].ny();
  ensure_shape(out.demand, tx, ty);
  ensure_shape(out.supply, tx, ty);
  for (std::size_t x = 0; x < 4; ++x) {
    for (int j = 0; j < ty; ++j) {
      for (int i = 0; i < tx; ++i) {
        const FdParams p = cell_fd(fields, x, i, j);
        const double r = state.rho[x](i, j);
        out.demand[x](i, j) = demand(r, p);
        out.supply[x](i, j) = supply(r, p);
      }
    }
  }
}

CellDemandSupply cell_demand_supply(const DensityState& state, const GridFields& fields) {
  CellDemandSupply out;
  cell_demand_supply_into(state, fields, out);
  return out;
}

void face_fluxes_into(const CellDemandSupply& ds, const Grid& grid, BoundaryMode boundary,
                      FaceFluxes& out) {
  const int tx = grid.total_nx();
  const int ty = grid.total_ny();
  ensure_shape(out.right, tx - 1, ty);
  ensure_shape(out.left, tx - 1, ty);
  ensure_shape(out.up, tx, ty - 1);
  ensure_shape(out.down, tx, ty - 1);
  const int lo = grid.ghost - 1;
  const int hi_x = grid.ghost + grid.nx - 1;
  const int hi_y = grid.ghost + grid.ny - 1;
  for (std::size_t x = 0; x < 4; ++x) {
    const Field2D& d = ds.demand[x];
    const Field2D& s = ds.supply[x];
    for (int j = 0; j < ty; ++j) {
      for (int f = 0; f < tx - 1; ++f) {
        const bool blocked = boundary == BoundaryMode::Wall && (f == lo || f == hi_x);
        out.right[x](f, j) = blocked ? 0.0 : std::min(d(f, j), s(f + 1, j));
        out.left[x](f, j) = blocked ? 0.0 : std::min(d(f + 1, j), s(f, j));
      }
    }
    for (int f = 0; f < ty - 1; ++f) {
      const bool blocked = boundary == BoundaryMode::Wall && (f == lo || f == hi_y);
      for (int i = 0; i < tx; ++i) {
        out.up[x](i, f) = blocked ? 0.0 : std::min(d(i, f), s(i, f + 1));
        out.down[x](i, f) = blocked ? 0.0 : std::min(d(i, f + 1), s(i, f));
      }
    }
  }
}

FaceFluxes face_fluxes(const CellDemandSupply& ds, const Grid& grid, BoundaryMode boundary) {
  FaceFluxes out;
  face_fluxes_into(ds, grid, boundary, out);
  return out;
}

namespace {

// Signed transport through a face: positive means towards increasing index.
inline double face_transport(double trig, double forward, double backward) {
  return std::max(trig, 0.0) * forward + std::min(trig, 0.0) * backward;
}

}  // namespace

void advective_update_into(const FaceFluxes& faces, const GridFields& fields, const Grid& grid,
                           CellRates& out) {
  ensure_shape(out, grid.total_nx(), grid.total_ny());
  const double inv_dx = 1.0 / grid.dx;
  const double inv_dy = 1.0 / grid.dy;
  for (std::size_t x = 0; x < 4; ++x) {
    out[x].fill(0.0);
    const Field2D& cf = fields.cos_face[x];
    const Field2D& sf = fields.sin_face[x];
    for (int j = grid.ghost; j < grid.ghost + grid.ny; ++j) {
      for (int i = grid.ghost; i < grid.ghost + grid.nx; ++i) {
        const double east = face_transport(cf(i, j), faces.right[x](i, j), faces.left[x](i, j));
        const double west =
            face_transport(cf(i - 1, j), faces.right[x](i - 1, j), faces.left[x](i - 1, j));
        const double north = face_transport(sf(i, j), faces.up[x](i, j), faces.down[x](i, j));
        const double south =
            face_transport(sf(i, j - 1), faces.up[x](i, j - 1), faces.down[x](i, j - 1));
        out[x](i, j) = -inv_dx * (east - west) - inv_dy * (north - south);
      }
    }
  }
}

CellRates advective_update(const FaceFluxes& faces, const GridFields& fields, const Grid& grid) {
  CellRates out;
  advective_update_into(faces, fields, grid, out);
  return out;
}

void mixing_update_into(const CellDemandSupply& ds, const GridFields& fields, const Grid& grid,
                        CellRates& out) {
  ensure_shape(out, grid.total_nx(), grid.total_ny());
  for (auto& f : out) f.fill(0.0);
  for (int j = grid.ghost; j < grid.ghost + grid.ny; ++j) {
    for (int i = grid.ghost; i < grid.ghost + grid.nx; ++i) {
      std::array<double, 4> in{}, outflow{};
      for (std::size_t x = 0; x < 4; ++x) {
        for (std::size_t y = 0; y < 4; ++y) {
          // X -> X turning leaves and re-enters the same direction.
          if (x == y) continue;
          const double phi = std::min(fields.alpha[x][y](i, j) * ds.demand[x](i, j),
                                      fields.beta[x][y](i, j) * ds.supply[y](i, j));
          outflow[x] += phi;
          in[y] += phi;
        }
      }
      const double inv_l = 1.0 / fields.length(i, j);
      for (std::size_t x = 0; x < 4; ++x) out[x](i, j) = inv_l * (in[x] - outflow[x]);
    }
  }
}

CellRates mixing_update(const CellDemandSupply& ds, const GridFields& fields, const Grid& grid) {
  CellRates out;
  mixing_update_into(ds, fields, grid, out);
  return out;
}

void io_update_into(const CellDemandSupply& ds, const PointSources& sources, std::size_t minute,
                    std::vector<IoCellFlux>& out) {
  out.resize(sources.cells.size());
  for (std::size_t c = 0; c < sources.cells.size(); ++c) {
    const SourceCell& cell = sources.cells[c];
    const std::size_t m = std::min(minute, cell.demand.size() - 1);
    IoCellFlux& f = out[c];
    f.i = cell.i;
    f.j = cell.j;
    for (std::size_t x = 0; x < 4; ++x) {
      f.source[x] = std::min(cell.demand[m][x], ds.supply[x](cell.i, cell.j));
      f.sink[x] = std::min(ds.demand[x](cell.i, cell.j), cell.supply[m][x]);
    }
  }
}

std::vector<IoCellFlux> io_update(const CellDemandSupply& ds, const PointSources& sources,
                                  std::size_t minute) {
  std::vector<IoCellFlux> out;
  io_update_into(ds, sources, minute, out);
  return out;
}

Simulation::Simulation(Grid grid, GridFields fields, PointSources sources, StepPlan plan,
                       SolverOptions options)
    : grid_(grid),
      fields_(std::move(fields)),
      sources_(std::move(sources)),
      plan_(std::move(plan)),
      options_(options),
      state_(grid_) {
  if (!(plan_.dt_general > 0.0) || !(plan_.dt_io > 0.0) || plan_.subcycles < 1)
    throw ConfigError("step plan needs positive time steps and at least one subcycle");
  for (const auto& f : fields_.length.data())
    if (!(f > 0.0)) throw ValidationError("cell length scale must be positive");
}

void Simulation::set_state(DensityState state) {
  for (const auto& f : state.rho)
    if (f.nx() != grid_.total_nx() || f.ny() != grid_.total_ny())
      throw ValidationError("state shape does not match the grid");
  state_ = std::move(state);
  zero_ghosts(state_);
  t_origin_ = state_.t;
  general_steps_in_output_ = 0;
  outputs_done_ = 0;
}

void Simulation::zero_ghosts(DensityState& state) const {
  for (auto& f : state.rho)
    for (int j = 0; j < grid_.total_ny(); ++j)
      for (int i = 0; i < grid_.total_nx(); ++i)
        if (!grid_.is_interior(i, j)) f(i, j) = 0.0;
}

double Simulation::vehicles() const {
  double total = 0.0;
  for (const auto& f : state_.rho)
    for (int j = grid_.ghost; j < grid_.ghost + grid_.ny; ++j)
      for (int i = grid_.ghost; i < grid_.ghost + grid_.nx; ++i) total += f(i, j);
  return total * grid_.cell_area();
}

void Simulation::step() {
  if (plan_.scheme == Scheme::Unsplit)
    step_unsplit();
  else
    step_split();
  ++steps_;
  // Rebuild the clock from whole output intervals so it does not drift.
  if (++general_steps_in_output_ == plan_.steps_per_output) {
    general_steps_in_output_ = 0;
    ++outputs_done_;
  }
  state_.t = t_origin_ + static_cast<double>(outputs_done_) * plan_.output_interval +
             static_cast<double>(general_steps_in_output_) * plan_.dt_general;
  audit();
}

void Simulation::advance(long steps) {
  for (long s = 0; s < steps; ++s) step();
}

void Simulation::accumulate_absorbed(double dt) {
  const int lo = grid_.ghost - 1;
  const int hi_x = grid_.ghost + grid_.nx - 1;
  const int hi_y = grid_.ghost + grid_.ny - 1;
  double out = 0.0;
  for (std::size_t x = 0; x < 4; ++x) {
    const Field2D& cf = fields_.cos_face[x];
    const Field2D& sf = fields_.sin_face[x];
    for (int j = grid_.ghost; j <= hi_y; ++j) {
      out -= grid_.dy * face_transport(cf(lo, j), faces_.right[x](lo, j), faces_.left[x](lo, j));
      out += grid_.dy *
             face_transport(cf(hi_x, j), faces_.right[x](hi_x, j), faces_.left[x](hi_x, j));
    }
    for (int i = grid_.ghost; i <= hi_x; ++i) {
      out -= grid_.dx * face_transport(sf(i, lo), faces_.up[x](i, lo), faces_.down[x](i, lo));
      out += grid_.dx *
             face_transport(sf(i, hi_y), faces_.up[x](i, hi_y), faces_.down[x](i, hi_y));
    }
  }
  budget_.absorbed += dt * out;
}

void Simulation::apply_io(DensityState& state, double dt) {
  const double area = grid_.cell_area();
  for (const auto& f : io_) {
    const double scale = dt / fields_.length(f.i, f.j);
    for (std::size_t x = 0; x < 4; ++x) {
      state.rho[x](f.i, f.j) += scale * (f.source[x] - f.sink[x]);
      budget_.injected += scale * f.source[x] * area;
      budget_.sunk += scale * f.sink[x] * area;
    }
  }
}

void Simulation::step_unsplit() {
  const double dt = plan_.dt_general;
  cell_demand_supply_into(state_, fields_, ds_);
  ++counters_.demand_supply;
  face_fluxes_into(ds_, grid_, options_.boundary, faces_);
  advective_update_into(faces_, fields_, grid_, adv_);
  ++counters_.advection;
  mixing_update_into(ds_, fields_, grid_, mix_);
  ++counters_.mixing;
  io_update_into(ds_, sources_, minute_of(state_.t, sources_.minutes), io_);
  ++counters_.io;

  accumulate_absorbed(dt);
  for (std::size_t x = 0; x < 4; ++x) {
    Field2D& r = state_.rho[x];
    for (int j = grid_.ghost; j < grid_.ghost + grid_.ny; ++j)
      for (int i = grid_.ghost; i < grid_.ghost + grid_.nx; ++i)
        r(i, j) += dt * (adv_[x](i, j) + mix_[x](i, j));
  }
  apply_io(state_, dt);
}

void Simulation::step_split() {
  const double dt = plan_.dt_general;
  cell_demand_supply_into(state_, fields_, ds_);
  ++counters_.demand_supply;
  face_fluxes_into(ds_, grid_, options_.boundary, faces_);
  advective_update_into(faces_, fields_, grid_, adv_);
  ++counters_.advection;
  mixing_update_into(ds_, fields_, grid_, mix_);
  ++counters_.mixing;

  accumulate_absorbed(dt);
  for (std::size_t x = 0; x < 4; ++x) {
    Field2D& r = state_.rho[x];
    for (int j = grid_.ghost; j < grid_.ghost + grid_.ny; ++j)
      for (int i = grid_.ghost; i < grid_.ghost + grid_.nx; ++i)
        r(i, j) += dt * (adv_[x](i, j) + mix_[x](i, j));
  }

  // Boundary flows only touch source cells, so each subcycle refreshes
  // demand and supply there alone.
  const double t0 = state_.t;
  for (int k = 0; k < plan_.subcycles; ++k) {
    for (const auto& cell : sources_.cells) {
      for (std::size_t x = 0; x < 4; ++x) {
        const FdParams p = cell_fd(fields_, x, cell.i, cell.j);
        const double r = state_.rho[x](cell.i, cell.j);
        ds_.demand[x](cell.i, cell.j) = demand(r, p);
        ds_.supply[x](cell.i, cell.j) = supply(r, p);
      }
    }
    ++counters_.demand_supply;
    const double t_sub = t0 + static_cast<double>(k) * plan_.dt_io;
    io_update_into(ds_, sources_, minute_of(t_sub, sources_.minutes), io_);
    ++counters_.io;
    apply_io(state_, plan_.dt_io);
  }
}

void Simulation::audit() {
  const bool strict = options_.mode == PositivityMode::Strict;
  const double area = grid_.cell_area();
  for (int j = grid_.ghost; j < grid_.ghost + grid_.ny; ++j) {
    for (int i = grid_.ghost; i < grid_.ghost + grid_.nx; ++i) {
      double sum = 0.0, sum_max = 0.0;
      for (std::size_t x = 0; x < 4; ++x) {
        const double r = state_.rho[x](i, j);
        if (!std::isfinite(r)) {
          std::ostringstream msg;
          msg << "non-finite density in cell (" << i << ", " << j << ") at t = " << state_.t;
          throw SimulationError(msg.str());
        }
        sum += r;
        sum_max += fields_.rho_max[x](i, j);
      }
      auto report = [&](const std::string& what, double value, double bound) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << " in cell (" << i << ", " << j << ") at t = " << state_.t << ": " << value
            << " (bound " << bound << ")";
        if (options_.on_violation == ViolationPolicy::Fail) throw SimulationError(msg.str());
        ++violations_;
        std::cerr << "warning: clamped " << msg.str() << '\n';
      };
      // Strict mode additionally bounds every partial density from below.
      if (strict) {
        for (std::size_t x = 0; x < 4; ++x) {
          double& r = state_.rho[x](i, j);
          if (r < -kAuditTolerance * fields_.rho_max[x](i, j)) {
            report(std::string("density ") + cardinal_name(kCardinals[x]) + " below zero", r,
                   0.0);
            budget_.clamped -= r * area;
            sum -= r;
            r = 0.0;
          }
        }
      }
      const double tol = kAuditTolerance * sum_max;
      if (sum < -tol) {
        report("total density below zero", sum, 0.0);
        for (auto& f : state_.rho) {
          double& r = f(i, j);
          if (r < 0.0) {
            budget_.clamped -= r * area;
            r = 0.0;
          }
        }
      } else if (sum > sum_max + tol) {
        report("total density above jam density", sum, sum_max);
        const double scale = sum_max / sum;
        for (auto& f : state_.rho) {
          double& r = f(i, j);
          budget_.clamped += (scale - 1.0) * r * area;
          r *= scale;
        }
      }
    }
  }
}

DensityState step_unsplit(const DensityState& state, const Grid& grid, const GridFields& fields,
                          const PointSources& sources, const StepPlan& plan,
                          SolverOptions options) {
  StepPlan p = plan;
  p.scheme = Scheme::Unsplit;
  Simulation sim(grid, fields, sources, p, options);
  sim.set_state(state);
  sim.step();
  DensityState out = sim.state();
  out.t = state.t + plan.dt_general;
  return out;
}

DensityState step_split(const DensityState& state, const Grid& grid, const GridFields& fields,
                        const PointSources& sources, const StepPlan& plan,
                        SolverOptions options) {
  StepPlan p = plan;
  p.scheme = Scheme::Split;
  Simulation sim(grid, fields, sources, p, options);
  sim.set_state(state);
  sim.step();
  DensityState out = sim.state();
  out.t = state.t + plan.dt_general;
  return out;
}

}  // namespace news
