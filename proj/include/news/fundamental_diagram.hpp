#pragma once

// Bilinear (triangular) fundamental diagram with Daganzo demand and supply.
//
// All relations are linear in the density, so the same functions serve
// street densities (veh/m) and the solver's per-area densities. Branch
// membership at rho_crit and rho_max follows the "<=" conventions of the
// piecewise definitions: a breakpoint belongs to the branch on its left.

#include <algorithm>

namespace news {

struct FdParams {
  double v_max = 0.0;    // free-flow speed
  double rho_max = 0.0;  // jam density
  double gamma = 1.0 / 3.0;

  double rho_crit() const { return gamma * rho_max; }
  /// Maximal flow v_max * rho_crit.
  double phi_max() const { return v_max * rho_crit(); }
  /// Magnitude of the congested-branch slope.
  double wave_speed() const { return v_max / (1.0 / gamma - 1.0); }
};

inline double flux(double rho, const FdParams& p) {
  if (rho < 0.0 || rho > p.rho_max) return 0.0;
  if (rho <= p.rho_crit()) return p.v_max * rho;
  return p.wave_speed() * (p.rho_max - rho);
}

inline double demand(double rho, const FdParams& p) {
  if (rho < 0.0) return 0.0;
  const double rc = p.rho_crit();
  if (rho <= rc) return p.v_max * rho;
  return p.v_max * rc;
}

/// Below zero the supply stays at phi_max (what min(c_K (rho_max - rho),
/// phi_max) gives), so an undershooting partial density never blocks inflow.
inline double supply(double rho, const FdParams& p) {
  const double rc = p.rho_crit();
  if (rho <= rc) return p.v_max * rc;
  if (rho <= p.rho_max) return p.v_max * rc * (p.rho_max - rho) / (p.rho_max - rc);
  return 0.0;
}

inline double demand_deriv(double rho, const FdParams& p) {
  if (rho < 0.0) return 0.0;
  if (rho <= p.rho_crit()) return p.v_max;
  return 0.0;
}

inline double supply_deriv(double rho, const FdParams& p) {
  const double rc = p.rho_crit();
  if (rho < 0.0 || rho <= rc) return 0.0;
  if (rho <= p.rho_max) return -p.v_max * rc / (p.rho_max - rc);
  return 0.0;
}

}  // namespace news
