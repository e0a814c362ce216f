#pragma once

#include <string>

#include "news/gridding.hpp"
#include "news/network.hpp"

namespace fixtures {

enum class CrossTurning { Through, Uniform };

/// Four arms of `arm` meters around a center node C; every arm is a
/// two-way street of one lane at `speed`.
inline news::StreetNetwork cross(CrossTurning turning, double arm = 100.0, double speed = 10.0,
                                 bool entries = false) {
  news::NetworkBuilder b;
  b.intersection("C", 0, 0);
  const char* arms[] = {"N", "E", "W", "S"};
  const double xs[] = {0, arm, -arm, 0};
  const double ys[] = {arm, 0, 0, -arm};
  for (int k = 0; k < 4; ++k) {
    const std::string a = arms[k];
    b.intersection(a, xs[k], ys[k], entries, entries);
    b.street(a + "in", a, "C", arm, 1, speed);
    b.street(a + "out", "C", a, arm, 1, speed);
    b.turn(a, a + "out", a + "in", 1.0);
  }
  const char* opposite[] = {"S", "W", "E", "N"};
  for (int k = 0; k < 4; ++k) {
    const std::string in = std::string(arms[k]) + "in";
    if (turning == CrossTurning::Through) {
      b.turn("C", in, std::string(opposite[k]) + "out", 1.0);
    } else {
      for (int m = 0; m < 4; ++m)
        if (m != k) b.turn("C", in, std::string(arms[m]) + "out", 1.0 / 3.0);
    }
  }
  return b.build();
}

/// Square cells of side h without padding.
inline news::Grid square_grid(int nx, int ny, double h) {
  news::Grid g;
  g.nx = nx;
  g.ny = ny;
  g.dx = g.dy = h;
  g.ghost = 1;
  return g;
}

/// Same speed, jam density (per area) and length scale everywhere, no
/// turning and no transport until the caller sets trig values.
inline news::GridFields uniform_fields(const news::Grid& g, double v, double rho_max,
                                       double length) {
  news::GridFields f(g);
  for (int j = 0; j < g.total_ny(); ++j)
    for (int i = 0; i < g.total_nx(); ++i) {
      f.length(i, j) = length;
      for (std::size_t x = 0; x < 4; ++x) {
        f.v_max[x](i, j) = v;
        f.rho_max[x](i, j) = rho_max;
        f.rho_crit[x](i, j) = f.gamma * rho_max;
      }
    }
  f.update_faces();
  return f;
}

inline void set_trig(news::GridFields& f, news::Cardinal d, double c, double s) {
  const std::size_t x = news::index(d);
  f.cos_bar[x].fill(c);
  f.sin_bar[x].fill(s);
  f.update_faces();
}

}  // namespace fixtures
