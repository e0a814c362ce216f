#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "news/common.hpp"
#include "news/network.hpp"

namespace news {

struct ParamOptions {
  double gamma = kDefaultGamma;
  /// Guard for capacity-weighted denominators.
  double epsilon = kDefaultEpsilon;
};

/// Fallbacks for cardinal directions without any projected street, taken as
/// network-wide street means.
struct NetworkDefaults {
  double v_max = 0.0;
  double rho_max = 0.0;
  double rho_crit = 0.0;
  double length = 0.0;

  static NetworkDefaults from(const StreetNetwork& network, double gamma);
};

/// Per-street supply ratios at one intersection, laid out like the
/// intersection's TurningMatrix (incoming rows, outgoing columns).
struct StreetPairMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct CardinalTurning {
  CardinalMatrix alpha{};
  CardinalMatrix beta{};
};

struct CardinalAggregates {
  PerCardinal<double> cos_bar{};
  PerCardinal<double> sin_bar{};
  PerCardinal<double> v_max{};
  PerCardinal<double> rho_max{};
  PerCardinal<double> rho_crit{};
  double length = 0.0;
  /// Directions that fell back to NetworkDefaults for speed or density.
  PerCardinal<bool> defaulted{};
};

/// Everything the grid needs from one intersection.
struct NewsIntersectionParams {
  CardinalAggregates aggregates;
  CardinalTurning turning;
};

StreetPairMatrix supply_ratios(const StreetNetwork& network, std::size_t k, double gamma);

CardinalTurning cardinal_turning(const StreetNetwork& network, std::size_t k,
                                 const StreetPairMatrix& beta, const ParamOptions& options);

CardinalAggregates cardinal_aggregates(const StreetNetwork& network, std::size_t k,
                                       const ParamOptions& options,
                                       const NetworkDefaults& defaults);

/// A boundary flow attributed to one street.
struct StreetFlow {
  std::size_t street = 0;
  double value = 0.0;  // veh/s, +inf for an unbounded sink
};

struct IoProjection {
  PerCardinal<double> source_demand{};
  PerCardinal<double> sink_supply{};
};

/// Projects per-street source demand and sink supply at intersection k onto
/// the cardinal directions.
IoProjection project_io_demand(const StreetNetwork& network, std::size_t k,
                               std::span<const StreetFlow> sources,
                               std::span<const StreetFlow> sinks);

std::vector<NewsIntersectionParams> compile_params(const StreetNetwork& network,
                                                   const ParamOptions& options);

/// Delimited per-intersection table for inspection.
void write_params_table(std::ostream& out, const StreetNetwork& network,
                        const std::vector<NewsIntersectionParams>& params);

}  // namespace news
