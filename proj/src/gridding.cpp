#include "news/gridding.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

namespace news {

namespace {

// Spacing used along an axis where the network has no extent.
constexpr double kFallbackSpacing = 100.0;

}  // namespace

Grid make_grid(const BoundingBox& bbox, const GridSpec& spec) {
  if (spec.ghost < 1) throw ConfigError("ghost layer count must be at least 1");
  if (spec.pad < 0) throw ConfigError("pad must be nonnegative");
  const double w = bbox.width();
  const double h = bbox.height();
  int cx = 1, cy = 1;
  double dx = 0.0, dy = 0.0;
  if (spec.spacing) {
    const double s = *spec.spacing;
    if (!(s > 0.0)) throw ConfigError("grid spacing must be positive");
    cx = std::max(1, static_cast<int>(std::ceil(w / s)));
    cy = std::max(1, static_cast<int>(std::ceil(h / s)));
    dx = w > 0.0 ? w / cx : s;
    dy = h > 0.0 ? h / cy : s;
  } else {
    if (!spec.cells_x || !spec.cells_y) throw ConfigError("grid needs nx and ny or a spacing");
    cx = *spec.cells_x;
    cy = *spec.cells_y;
    if (cx < 1 || cy < 1) throw ConfigError("grid cell counts must be positive");
    dx = w > 0.0 ? w / cx : 0.0;
    dy = h > 0.0 ? h / cy : 0.0;
    if (dx == 0.0) dx = dy > 0.0 ? dy : kFallbackSpacing;
    if (dy == 0.0) dy = dx;
  }
  Grid g;
  g.nx = cx + 2 * spec.pad;
  g.ny = cy + 2 * spec.pad;
  g.dx = dx;
  g.dy = dy;
  g.ghost = spec.ghost;
  g.pad = spec.pad;
  // Degenerate axes center the single cell on the network.
  const double x_lo = w > 0.0 ? bbox.min.x : bbox.min.x - 0.5 * dx * cx;
  const double y_lo = h > 0.0 ? bbox.min.y : bbox.min.y - 0.5 * dy * cy;
  g.origin = {x_lo - spec.pad * dx, y_lo - spec.pad * dy};
  return g;
}

std::pair<int, int> containing_cell(const Grid& grid, Vec2 p) {
  auto locate = [](double coord, double origin, double h, int n) {
    const double rel = (coord - origin) / h;
    if (!(rel >= 0.0) || rel > static_cast<double>(n)) return -1;
    return std::min(static_cast<int>(std::floor(rel)), n - 1);
  };
  const int i = locate(p.x, grid.origin.x, grid.dx, grid.nx);
  const int j = locate(p.y, grid.origin.y, grid.dy, grid.ny);
  if (i < 0 || j < 0)
    throw ValidationError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                          ") lies outside the computational domain");
  return {i + grid.ghost, j + grid.ghost};
}

GridFields::GridFields(const Grid& grid, double gamma_) : gamma(gamma_) {
  const int tx = grid.total_nx();
  const int ty = grid.total_ny();
  for (auto d : kCardinals) {
    const std::size_t x = index(d);
    cos_bar[x] = Field2D(tx, ty);
    sin_bar[x] = Field2D(tx, ty);
    v_max[x] = Field2D(tx, ty);
    rho_max[x] = Field2D(tx, ty);
    rho_crit[x] = Field2D(tx, ty);
    cos_face[x] = Field2D(tx - 1, ty);
    sin_face[x] = Field2D(tx, ty - 1);
    for (std::size_t y = 0; y < 4; ++y) {
      alpha[x][y] = Field2D(tx, ty);
      beta[x][y] = Field2D(tx, ty);
    }
  }
  length = Field2D(tx, ty);
}

void GridFields::update_faces() {
  for (std::size_t x = 0; x < 4; ++x) {
    const Field2D& c = cos_bar[x];
    const Field2D& s = sin_bar[x];
    Field2D& cf = cos_face[x];
    Field2D& sf = sin_face[x];
    for (int j = 0; j < cf.ny(); ++j)
      for (int i = 0; i < cf.nx(); ++i) cf(i, j) = 0.5 * (c(i, j) + c(i + 1, j));
    for (int j = 0; j < sf.ny(); ++j)
      for (int i = 0; i < sf.nx(); ++i) sf(i, j) = 0.5 * (s(i, j) + s(i, j + 1));
  }
}

std::vector<double> idw_weights(std::span<const Vec2> points, Vec2 q, double mu) {
  std::vector<double> dist(points.size());
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points.size(); ++k) {
    dist[k] = std::hypot(q.x - points[k].x, q.y - points[k].y);
    nearest = std::min(nearest, dist[k]);
  }
  // Shifting by the nearest distance cancels in the normalization and keeps
  // the largest weight at exactly one, so far-away cells never underflow.
  double total = 0.0;
  for (double& d : dist) {
    d = std::exp(-mu * (d - nearest));
    total += d;
  }
  for (double& d : dist) d /= total;
  return dist;
}

double idw_interpolate(std::span<const Vec2> points, std::span<const double> values, Vec2 q,
                       double mu) {
  if (points.empty() || points.size() != values.size())
    throw ValidationError("interpolation needs matching, nonempty point and value lists");
  const auto w = idw_weights(points, q, mu);
  double v = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) v += w[k] * values[k];
  return v;
}

GridFields rasterize_parameters(const StreetNetwork& network,
                                const std::vector<NewsIntersectionParams>& params,
                                const Grid& grid, double mu, double gamma) {
  if (params.size() != network.intersections().size())
    throw ValidationError("parameter count does not match intersection count");
  if (!(mu > 0.0)) throw ConfigError("interpolation decay mu must be positive");
  std::vector<Vec2> points;
  points.reserve(params.size());
  for (const auto& node : network.intersections()) points.push_back(node.position);

  GridFields f(grid, gamma);
  const double inv_area = 1.0 / grid.cell_area();
  for (int j = 0; j < grid.total_ny(); ++j) {
    for (int i = 0; i < grid.total_nx(); ++i) {
      const auto w = idw_weights(points, grid.center(i, j), mu);
      auto blend = [&](auto&& get) {
        double v = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) v += w[k] * get(params[k]);
        return v;
      };
      f.length(i, j) = blend([](const auto& p) { return p.aggregates.length; });
      for (std::size_t x = 0; x < 4; ++x) {
        f.cos_bar[x](i, j) = blend([x](const auto& p) { return p.aggregates.cos_bar[x]; });
        f.sin_bar[x](i, j) = blend([x](const auto& p) { return p.aggregates.sin_bar[x]; });
        f.v_max[x](i, j) = blend([x](const auto& p) { return p.aggregates.v_max[x]; });
        f.rho_max[x](i, j) =
            inv_area * blend([x](const auto& p) { return p.aggregates.rho_max[x]; });
        f.rho_crit[x](i, j) =
            inv_area * blend([x](const auto& p) { return p.aggregates.rho_crit[x]; });
        for (std::size_t y = 0; y < 4; ++y) {
          f.alpha[x][y](i, j) = blend([x, y](const auto& p) { return p.turning.alpha[x][y]; });
          f.beta[x][y](i, j) = blend([x, y](const auto& p) { return p.turning.beta[x][y]; });
        }
      }
    }
  }
  f.update_faces();
  return f;
}

double PointSources::total_demand(const Grid& grid, std::size_t m) const {
  double total = 0.0;
  for (const auto& c : cells)
    for (double d : c.demand.at(m)) total += d * grid.cell_area();
  return total;
}

PointSources rasterize_point_sources(const StreetNetwork& network,
                                     const std::vector<IntersectionIo>& io, const Grid& grid,
                                     std::size_t minutes) {
  PointSources out;
  out.minutes = std::max<std::size_t>(minutes, 1);
  const double inv_area = 1.0 / grid.cell_area();
  for (const auto& entry : io) {
    const auto [i, j] = containing_cell(grid, network.intersection(entry.intersection).position);
    auto it = std::find_if(out.cells.begin(), out.cells.end(),
                           [&](const SourceCell& c) { return c.i == i && c.j == j; });
    if (it == out.cells.end()) {
      SourceCell cell;
      cell.i = i;
      cell.j = j;
      cell.demand.assign(out.minutes, PerCardinal<double>{});
      cell.supply.assign(out.minutes, PerCardinal<double>{});
      out.cells.push_back(std::move(cell));
      it = std::prev(out.cells.end());
    }
    for (std::size_t m = 0; m < out.minutes && m < entry.source_demand.size(); ++m) {
      for (std::size_t x = 0; x < 4; ++x) {
        it->demand[m][x] += entry.source_demand[m][x] * inv_area;
        it->supply[m][x] += entry.sink_supply[m][x] * inv_area;
      }
    }
  }
  std::sort(out.cells.begin(), out.cells.end(), [](const SourceCell& a, const SourceCell& b) {
    return a.j != b.j ? a.j < b.j : a.i < b.i;
  });
  return out;
}

void write_field(std::ostream& out, const Grid& grid, const Field2D& field) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << grid.nx << ' ' << grid.ny << ' ' << grid.dx << ' ' << grid.dy << ' ' << grid.origin.x
      << ' ' << grid.origin.y << '\n';
  for (int j = grid.ghost; j < grid.ghost + grid.ny; ++j) {
    for (int i = grid.ghost; i < grid.ghost + grid.nx; ++i) {
      if (i > grid.ghost) out << ',';
      out << field(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void dump_fields(const std::filesystem::path& dir, const Grid& grid, const GridFields& fields) {
  std::filesystem::create_directories(dir);
  auto dump = [&](const std::string& name, const Field2D& f) {
    std::ofstream out(dir / (name + ".csv"));
    if (!out) throw ConfigError("cannot write '" + (dir / (name + ".csv")).string() + "'");
    write_field(out, grid, f);
  };
  dump("L", fields.length);
  for (auto d : kCardinals) {
    const std::size_t x = index(d);
    const std::string c(1, cardinal_name(d));
    dump("cos_" + c, fields.cos_bar[x]);
    dump("sin_" + c, fields.sin_bar[x]);
    dump("vmax_" + c, fields.v_max[x]);
    dump("rhomax_" + c, fields.rho_max[x]);
    dump("rhocrit_" + c, fields.rho_crit[x]);
    for (auto e : kCardinals) {
      const std::string pair = c + cardinal_name(e);
      dump("alpha_" + pair, fields.alpha[x][index(e)]);
      dump("beta_" + pair, fields.beta[x][index(e)]);
    }
  }
}

}  // namespace news
