#include "news/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace news {

void CflConfig::validate() const {
  auto cfl_ok = [](double c) { return c > 0.0 && c <= 1.0; };
  if (!cfl_ok(c_adv)) throw ConfigError("c_adv must lie in (0, 1]");
  if (c_mix && !cfl_ok(*c_mix)) throw ConfigError("c_mix must lie in (0, 1]");
  if (!cfl_ok(c_io)) throw ConfigError("c_io must lie in (0, 1]");
  if (!(dt_cap > 0.0)) throw ConfigError("dt_cap must be positive");
  if (!(output_interval > 0.0) || std::floor(output_interval) != output_interval)
    throw ConfigError("output_interval must be a positive whole number of seconds");
}

namespace {

double max_speed(const GridFields& fields) {
  double v = 0.0;
  for (const auto& f : fields.v_max)
    for (double s : f.data()) v = std::max(v, std::abs(s));
  return v;
}

double min_length(const GridFields& fields) {
  double l = std::numeric_limits<double>::infinity();
  for (double s : fields.length.data()) l = std::min(l, s);
  return l;
}

}  // namespace

double dt_advection(const GridFields& fields, const Grid& grid, double c_adv) {
  const double v = max_speed(fields);
  if (!(v > 0.0)) throw ConfigError("maximal speed is zero, advective time step undefined");
  return c_adv * std::min(grid.dx, grid.dy) / v;
}

double dt_mixing(const GridFields& fields, double c_mix) {
  const double v = max_speed(fields);
  if (!(v > 0.0)) throw ConfigError("maximal speed is zero, mixing time step undefined");
  return c_mix * min_length(fields) / v;
}

double dt_io(const GridFields& fields, const PointSources& sources, double c_io,
             double epsilon) {
  const double v = max_speed(fields);
  if (!(v > 0.0)) throw ConfigError("maximal speed is zero, io time step undefined");
  const double inv_speed = 1.0 / v;
  const double gamma = fields.gamma;
  const double branch = std::min(1.0, (1.0 - gamma) / gamma);

  // Cells without boundary flow contribute rho_max / epsilon.
  double density_term = std::numeric_limits<double>::infinity();
  for (const auto& f : fields.rho_max)
    for (double r : f.data()) density_term = std::min(density_term, r / epsilon);

  double demand_term = density_term;
  double supply_term = density_term;
  for (const auto& cell : sources.cells) {
    for (std::size_t x = 0; x < 4; ++x) {
      const double rho_max = fields.rho_max[x](cell.i, cell.j);
      const double phi_max = fields.v_max[x](cell.i, cell.j) * fields.rho_crit[x](cell.i, cell.j);
      for (std::size_t m = 0; m < cell.demand.size(); ++m) {
        demand_term = std::min(demand_term, rho_max / (cell.demand[m][x] + epsilon));
        double s = cell.supply[m][x];
        if (std::isinf(s)) s = phi_max;
        supply_term = std::min(supply_term, rho_max / (s + epsilon));
      }
    }
  }
  const double bracket =
      std::min({2.0 * inv_speed * branch, demand_term, supply_term, inv_speed});
  return c_io * min_length(fields) * bracket;
}

OutputFit fit_to_output(double candidate, double output_interval, double cap) {
  if (!(candidate > 0.0)) throw ConfigError("time step candidate must be positive");
  const double limit = std::min(candidate, cap);
  const double steps = std::ceil(output_interval / limit);
  return {output_interval / steps, static_cast<long>(steps)};
}

SubcycleFit fit_subcycles(double dt_general, double dt_io_candidate) {
  if (!(dt_general > 0.0) || !(dt_io_candidate > 0.0))
    throw ConfigError("subcycle fit needs positive time steps");
  const double k = std::ceil(dt_general / dt_io_candidate);
  return {dt_general / k, static_cast<int>(k)};
}

StepPlan plan_steps(const Grid& grid, const GridFields& fields, const PointSources& sources,
                    const CflConfig& cfl, Scheme scheme, double epsilon) {
  cfl.validate();
  StepPlan plan;
  plan.scheme = scheme;
  plan.mode = cfl.mode();
  plan.output_interval = cfl.output_interval;
  plan.dt_advection = dt_advection(fields, grid, cfl.c_adv);
  plan.dt_io_restriction = dt_io(fields, sources, cfl.c_io, epsilon);

  double candidate = plan.dt_advection;
  plan.binding = "advection";
  auto consider = [&](double dt, const char* name) {
    if (dt < candidate) {
      candidate = dt;
      plan.binding = name;
    }
  };
  if (scheme == Scheme::Unsplit) {
    plan.dt_mixing = dt_mixing(fields, cfl.c_mix.value_or(kUnsplitMixingCfl));
    consider(plan.dt_mixing, "mixing");
    consider(plan.dt_io_restriction, "io");
  } else if (cfl.c_mix) {
    plan.dt_mixing = dt_mixing(fields, *cfl.c_mix);
    consider(plan.dt_mixing, "mixing");
  }
  if (cfl.dt_cap < candidate) plan.binding = "cap";

  const auto fit = fit_to_output(candidate, cfl.output_interval, cfl.dt_cap);
  plan.dt_general = fit.dt;
  plan.steps_per_output = fit.steps_per_output;
  if (scheme == Scheme::Unsplit) {
    plan.dt_io = plan.dt_general;
    plan.subcycles = 1;
  } else {
    const auto sub = fit_subcycles(plan.dt_general, plan.dt_io_restriction);
    plan.dt_io = sub.dt_io;
    plan.subcycles = sub.subcycles;
  }
  return plan;
}

}  // namespace news
