#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "news/common.hpp"
#include "news/network.hpp"
#include "news/news_params.hpp"
#include "news/schedule.hpp"

namespace news {

/// Enlarged Cartesian grid. Storage indices (i, j) run over
/// [0, nx + 2 ghost) x [0, ny + 2 ghost); the interior starts at `ghost`.
/// The interior covers the network bounding box plus `pad` cells per side.
struct Grid {
  int nx = 1;
  int ny = 1;
  double dx = 1.0;
  double dy = 1.0;
  Vec2 origin;  // lower-left corner of the interior
  int ghost = 1;
  int pad = 0;

  int total_nx() const { return nx + 2 * ghost; }
  int total_ny() const { return ny + 2 * ghost; }
  std::size_t total_cells() const {
    return static_cast<std::size_t>(total_nx()) * static_cast<std::size_t>(total_ny());
  }
  double cell_area() const { return dx * dy; }

  bool is_interior(int i, int j) const {
    return i >= ghost && i < ghost + nx && j >= ghost && j < ghost + ny;
  }
  /// Barycenter of storage cell (i, j); ghost cells extend the lattice.
  Vec2 center(int i, int j) const {
    return {origin.x + (i - ghost + 0.5) * dx, origin.y + (j - ghost + 0.5) * dy};
  }
};

/// User-level resolution request: either cell counts across the network
/// bounding box or a target spacing.
struct GridSpec {
  std::optional<int> cells_x;
  std::optional<int> cells_y;
  std::optional<double> spacing;
  int pad = 3;
  int ghost = 1;
};

Grid make_grid(const BoundingBox& bbox, const GridSpec& spec);

/// Storage cell holding point p: half-open cells, points on the upper domain
/// edge belong to the last interior cell. Throws outside the interior.
std::pair<int, int> containing_cell(const Grid& grid, Vec2 p);

/// Row-major scalar raster over the full storage extent (ghosts included).
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nx, int ny, double value = 0.0)
      : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), value) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Field2D&, const Field2D&) = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> data_;
};

/// Cell-centered parameters plus face-averaged trig terms. Densities
/// (rho_max, rho_crit) are stored per unit area: the interpolated street
/// value divided by the cell area.
struct GridFields {
  GridFields() = default;
  explicit GridFields(const Grid& grid, double gamma = kDefaultGamma);

  double gamma = kDefaultGamma;
  PerCardinal<Field2D> cos_bar, sin_bar, v_max, rho_max, rho_crit;
  Field2D length;
  std::array<PerCardinal<Field2D>, 4> alpha;  // [from][to]
  std::array<PerCardinal<Field2D>, 4> beta;
  /// cos_bar at vertical face (i + 1/2, j): (total_nx - 1) x total_ny.
  PerCardinal<Field2D> cos_face;
  /// sin_bar at horizontal face (i, j + 1/2): total_nx x (total_ny - 1).
  PerCardinal<Field2D> sin_face;

  /// Recomputes face trig as arithmetic means of the adjacent cells.
  void update_faces();
};

/// Exponentially weighted interpolation of intersection values at q.
double idw_interpolate(std::span<const Vec2> points, std::span<const double> values, Vec2 q,
                       double mu);

/// Normalized interpolation weights of every point at q.
std::vector<double> idw_weights(std::span<const Vec2> points, Vec2 q, double mu);

GridFields rasterize_parameters(const StreetNetwork& network,
                                const std::vector<NewsIntersectionParams>& params,
                                const Grid& grid, double mu, double gamma);

/// Per-cell boundary flows in flow per unit area: veh/s divided by the cell
/// area. Supply may be +inf (unbounded sink).
struct SourceCell {
  int i = 0;
  int j = 0;
  std::vector<PerCardinal<double>> demand;  // per minute
  std::vector<PerCardinal<double>> supply;
};

struct PointSources {
  std::size_t minutes = 1;
  std::vector<SourceCell> cells;

  /// Sum of source demand times cell area at minute m (veh/s).
  double total_demand(const Grid& grid, std::size_t m) const;
};

PointSources rasterize_point_sources(const StreetNetwork& network,
                                     const std::vector<IntersectionIo>& io, const Grid& grid,
                                     std::size_t minutes);

/// Writes the interior of a field: header line "nx ny dx dy x0 y0", then ny
/// comma-separated rows from south to north.
void write_field(std::ostream& out, const Grid& grid, const Field2D& field);

/// Writes every parameter raster of `fields` into `dir`.
void dump_fields(const std::filesystem::path& dir, const Grid& grid, const GridFields& fields);

}  // namespace news
