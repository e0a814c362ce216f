#pragma once

#include <cstddef>
#include <vector>

#include "news/gridding.hpp"
#include "news/timestep.hpp"

namespace news {

/// Partial densities per unit area on the full storage grid. Ghost cells
/// hold zero at all times.
struct DensityState {
  DensityState() = default;
  explicit DensityState(const Grid& grid);

  PerCardinal<Field2D> rho;
  double t = 0.0;
};

struct CellDemandSupply {
  PerCardinal<Field2D> demand;
  PerCardinal<Field2D> supply;
};

/// Godunov demand/supply fluxes at every face. `right`/`left` live on
/// vertical faces (i + 1/2, j), `up`/`down` on horizontal faces (i, j + 1/2);
/// all are nonnegative magnitudes.
struct FaceFluxes {
  PerCardinal<Field2D> right, left;
  PerCardinal<Field2D> up, down;
};

/// How faces between interior and ghost cells behave. Wall blocks all
/// transport across the domain edge and exists for diagnostics only.
enum class BoundaryMode { Absorbing, Wall };

enum class ViolationPolicy { Fail, Clamp };

/// Boundary flow in one source cell before the 1/L scaling.
struct IoCellFlux {
  int i = 0;
  int j = 0;
  PerCardinal<double> source{};
  PerCardinal<double> sink{};
};

using CellRates = PerCardinal<Field2D>;

// Building blocks of one update. The *_into variants reuse caller storage.

void cell_demand_supply_into(const DensityState& state, const GridFields& fields,
                             CellDemandSupply& out);
CellDemandSupply cell_demand_supply(const DensityState& state, const GridFields& fields);

void face_fluxes_into(const CellDemandSupply& ds, const Grid& grid, BoundaryMode boundary,
                      FaceFluxes& out);
FaceFluxes face_fluxes(const CellDemandSupply& ds, const Grid& grid,
                       BoundaryMode boundary = BoundaryMode::Absorbing);

/// Donor-cell upwind divergence of the face fluxes; zero on ghost cells.
void advective_update_into(const FaceFluxes& faces, const GridFields& fields, const Grid& grid,
                           CellRates& out);
CellRates advective_update(const FaceFluxes& faces, const GridFields& fields, const Grid& grid);

/// Net turning between cardinal directions scaled by 1/L; zero on ghosts.
void mixing_update_into(const CellDemandSupply& ds, const GridFields& fields, const Grid& grid,
                        CellRates& out);
CellRates mixing_update(const CellDemandSupply& ds, const GridFields& fields, const Grid& grid);

/// Supply-limited source and demand-limited sink flows of every source cell.
void io_update_into(const CellDemandSupply& ds, const PointSources& sources, std::size_t minute,
                    std::vector<IoCellFlux>& out);
std::vector<IoCellFlux> io_update(const CellDemandSupply& ds, const PointSources& sources,
                                  std::size_t minute);

struct SolverOptions {
  PositivityMode mode = PositivityMode::NonStrict;
  ViolationPolicy on_violation = ViolationPolicy::Fail;
  BoundaryMode boundary = BoundaryMode::Absorbing;
};

/// Cumulative vehicle flows. With the per-area state, vehicles are
/// sum(rho) * cell area.
struct Budget {
  double injected = 0.0;
  double sunk = 0.0;
  double absorbed = 0.0;  // lost through the ghost layer
  double clamped = 0.0;   // net change from clamp-and-warn corrections
};

/// Operator sweeps performed so far; each io subcycle counts a
/// demand/supply evaluation and an io evaluation.
struct EvalCounters {
  long demand_supply = 0;
  long advection = 0;
  long mixing = 0;
  long io = 0;

  long total() const { return demand_supply + advection + mixing + io; }
};

class Simulation {
 public:
  Simulation(Grid grid, GridFields fields, PointSources sources, StepPlan plan,
             SolverOptions options = {});

  /// One general step of the configured scheme.
  void step();
  void advance(long steps);

  const DensityState& state() const { return state_; }
  /// Replaces the state; ghost cells are reset to zero.
  void set_state(DensityState state);

  const Grid& grid() const { return grid_; }
  const GridFields& fields() const { return fields_; }
  const PointSources& sources() const { return sources_; }
  const StepPlan& plan() const { return plan_; }
  const Budget& budget() const { return budget_; }
  const EvalCounters& counters() const { return counters_; }
  long violations() const { return violations_; }
  long steps_taken() const { return steps_; }

  double vehicles() const;

 private:
  void step_unsplit();
  void step_split();
  void accumulate_absorbed(double dt);
  /// Adds dt * (source - sink) / L of the current io fluxes to `state`.
  void apply_io(DensityState& state, double dt);
  void audit();
  void zero_ghosts(DensityState& state) const;

  Grid grid_;
  GridFields fields_;
  PointSources sources_;
  StepPlan plan_;
  SolverOptions options_;

  DensityState state_;
  CellDemandSupply ds_;
  FaceFluxes faces_;
  CellRates adv_, mix_;
  std::vector<IoCellFlux> io_;

  Budget budget_;
  EvalCounters counters_;
  long violations_ = 0;
  long steps_ = 0;
  long general_steps_in_output_ = 0;
  long outputs_done_ = 0;
  double t_origin_ = 0.0;
};

/// One unsplit forward-Euler step of advection, mixing and io.
DensityState step_unsplit(const DensityState& state, const Grid& grid, const GridFields& fields,
                          const PointSources& sources, const StepPlan& plan,
                          SolverOptions options = {});

/// Advection and mixing with dt_general, then K io subcycles of dt_io.
DensityState step_split(const DensityState& state, const Grid& grid, const GridFields& fields,
                        const PointSources& sources, const StepPlan& plan,
                        SolverOptions options = {});

}  // namespace news
