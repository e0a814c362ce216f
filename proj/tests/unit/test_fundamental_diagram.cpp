#include <doctest.h>

#include "news/fundamental_diagram.hpp"

using namespace news;

TEST_CASE("flux at the breakpoints") {
  const FdParams p{12.0, 1.0 / 6.0, 1.0 / 3.0};
  CHECK(flux(0.0, p) == 0.0);
  CHECK(flux(p.rho_crit(), p) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(flux(p.rho_max, p) == 0.0);
  CHECK(p.phi_max() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Continuity of the two branches at rho_crit.
  CHECK(p.v_max * p.rho_crit() ==
        doctest::Approx(p.wave_speed() * (p.rho_max - p.rho_crit())).epsilon(1e-12));
}

TEST_CASE("demand and supply branches") {
  const FdParams p{12.0, 1.0 / 6.0, 1.0 / 3.0};
  const double rc = p.rho_crit();
  CHECK(demand(0.0, p) == 0.0);
  CHECK(supply(0.0, p) == p.v_max * rc);
  CHECK(demand(p.rho_max, p) == p.v_max * rc);
  CHECK(supply(p.rho_max, p) == 0.0);
  CHECK(demand(rc / 2, p) == doctest::Approx(p.v_max * rc / 2));
  CHECK(supply(rc / 2, p) == p.v_max * rc);
  CHECK(demand(-1.0, p) == 0.0);
  CHECK(supply(2 * p.rho_max, p) == 0.0);
}

TEST_CASE("derivatives") {
  const FdParams p{12.0, 1.0 / 6.0, 1.0 / 3.0};
  const double rc = p.rho_crit();
  CHECK(demand_deriv(rc / 2, p) == p.v_max);
  CHECK(supply_deriv(rc / 2, p) == 0.0);
  const double mid = (rc + p.rho_max) / 2;
  CHECK(demand_deriv(mid, p) == 0.0);
  CHECK(supply_deriv(mid, p) == doctest::Approx(-p.wave_speed()).epsilon(1e-14));
  CHECK(demand_deriv(-1.0, p) == 0.0);
  CHECK(supply_deriv(-1.0, p) == 0.0);
  // Breakpoints take the left branch.
  CHECK(demand_deriv(rc, p) == p.v_max);
  CHECK(supply_deriv(rc, p) == 0.0);
}

TEST_CASE("largest slope is the free-flow speed") {
  const FdParams p{9.0, 0.5, 0.25};
  double steepest = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double r = p.rho_max * k / 1000.0;
    steepest = std::max({steepest, std::abs(demand_deriv(r, p)), std::abs(supply_deriv(r, p))});
  }
  CHECK(steepest == p.v_max);
}

TEST_CASE("one third gives half the free-flow speed") {
  for (double v : {5.0, 8.3, 13.9, 33.3})
    CHECK(FdParams{v, 1.0, 1.0 / 3.0}.wave_speed() == v / 2);
}
