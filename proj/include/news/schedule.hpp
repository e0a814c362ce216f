#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "news/common.hpp"
#include "news/network.hpp"

namespace news {

enum class FlowKind { Source, Sink };

/// Per-minute boundary flow at one intersection, optionally attributed to a
/// street. Values are veh/s; +inf marks an unbounded sink.
struct ScheduleSeries {
  std::size_t intersection = 0;
  std::optional<std::size_t> street;
  FlowKind kind = FlowKind::Source;
  std::vector<double> values;
};

/// Inflow demand and outflow supply given for every minute of the run.
class DemandSchedule {
 public:
  DemandSchedule() = default;
  DemandSchedule(std::size_t minutes, std::vector<ScheduleSeries> series);

  std::size_t minutes() const { return minutes_; }
  const std::vector<ScheduleSeries>& series() const { return series_; }
  bool empty() const { return series_.empty(); }

  /// Minute index floor(t / 60), clamped to the last scheduled minute.
  std::size_t minute_of(double t) const;

  /// Sum over series and minutes of source demand times 60 s.
  double total_source_vehicles() const;

 private:
  std::size_t minutes_ = 1;
  std::vector<ScheduleSeries> series_;
};

std::size_t minute_of(double t, std::size_t minutes);

DemandSchedule parse_schedule(std::istream& in, const StreetNetwork& network);
DemandSchedule load_schedule(const std::filesystem::path& path, const StreetNetwork& network);

/// Cardinal source demand and sink supply of one intersection, per minute.
struct IntersectionIo {
  std::size_t intersection = 0;
  std::vector<PerCardinal<double>> source_demand;
  std::vector<PerCardinal<double>> sink_supply;
};

/// Distributes every series onto streets (explicit attribution, otherwise
/// outgoing streets for sources and incoming streets for sinks, weighted by
/// capacity) and projects them onto the cardinal directions.
std::vector<IntersectionIo> project_schedule(const StreetNetwork& network,
                                             const DemandSchedule& schedule, double gamma);

}  // namespace news
