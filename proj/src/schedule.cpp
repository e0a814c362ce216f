#include "news/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "news/news_params.hpp"
#include "text_util.hpp"

namespace news {

DemandSchedule::DemandSchedule(std::size_t minutes, std::vector<ScheduleSeries> series)
    : minutes_(std::max<std::size_t>(minutes, 1)), series_(std::move(series)) {
  for (auto& s : series_) {
    if (s.values.size() > minutes_)
      throw ValidationError("schedule series longer than the declared minute count");
    s.values.resize(minutes_, 0.0);
    for (double v : s.values) {
      if (std::isnan(v) || v < 0.0) throw ValidationError("schedule values must be >= 0");
      if (std::isinf(v) && s.kind == FlowKind::Source)
        throw ValidationError("source demand must be finite");
    }
  }
}

std::size_t minute_of(double t, std::size_t minutes) {
  if (minutes == 0) return 0;
  if (!(t > 0.0)) return 0;
  const double m = std::floor(t / 60.0);
  if (m >= static_cast<double>(minutes - 1)) return minutes - 1;
  return static_cast<std::size_t>(m);
}

std::size_t DemandSchedule::minute_of(double t) const { return news::minute_of(t, minutes_); }

double DemandSchedule::total_source_vehicles() const {
  double total = 0.0;
  for (const auto& s : series_) {
    if (s.kind != FlowKind::Source) continue;
    for (double v : s.values) total += 60.0 * v;
  }
  return total;
}

DemandSchedule parse_schedule(std::istream& in, const StreetNetwork& network) {
  using Key = std::tuple<std::size_t, std::size_t, int>;  // intersection, street+1, kind
  std::map<Key, std::map<std::size_t, double>> data;
  double scale = 1.0;
  std::optional<std::size_t> declared_minutes;
  std::size_t needed_minutes = 0;

  std::string raw;
  std::size_t line_no = 0;
  auto where = [&] { return "schedule line " + std::to_string(line_no) + ": "; };
  while (std::getline(in, raw)) {
    ++line_no;
    auto t = detail::tokenize(detail::strip_comment(raw));
    if (t.empty()) continue;
    if (t[0] == "units") {
      if (t.size() != 2) throw ParseError(where() + "expected 'units veh/s|veh/h'");
      if (t[1] == "veh/s")
        scale = 1.0;
      else if (t[1] == "veh/h")
        scale = 1.0 / 3600.0;
      else
        throw ParseError(where() + "unknown unit '" + t[1] + "'");
      continue;
    }
    if (t[0] == "minutes") {
      if (t.size() != 2) throw ParseError(where() + "expected 'minutes M'");
      const int m = detail::parse_int(t[1], line_no);
      if (m < 1) throw ValidationError(where() + "minute count must be positive");
      declared_minutes = static_cast<std::size_t>(m);
      continue;
    }
    if (t.size() != 4 && t.size() != 5)
      throw ParseError(where() + "expected 'intersection [street] in|out minute value'");
    const bool attributed = t.size() == 5;
    const std::string& kind_token = t[attributed ? 2 : 1];
    const std::string& minute_token = t[attributed ? 3 : 2];
    const std::string& value_token = t[attributed ? 4 : 3];

    auto k = network.find_intersection(t[0]);
    if (!k) throw ValidationError(where() + "unknown intersection '" + t[0] + "'");
    FlowKind kind;
    if (kind_token == "in")
      kind = FlowKind::Source;
    else if (kind_token == "out")
      kind = FlowKind::Sink;
    else
      throw ParseError(where() + "kind must be 'in' or 'out', got '" + kind_token + "'");

    const auto& node = network.intersection(*k);
    if (kind == FlowKind::Source && !node.is_entry)
      throw ValidationError(where() + "intersection '" + node.id + "' is not an entry");
    if (kind == FlowKind::Sink && !node.is_exit)
      throw ValidationError(where() + "intersection '" + node.id + "' is not an exit");

    std::size_t street_key = 0;
    if (attributed) {
      auto s = network.find_street(t[1]);
      if (!s) throw ValidationError(where() + "unknown street '" + t[1] + "'");
      const auto& st = network.street(*s);
      const bool fits = kind == FlowKind::Source ? st.from == *k : st.to == *k;
      if (!fits)
        throw ValidationError(where() + "street '" + st.id + "' does not " +
                              (kind == FlowKind::Source ? "leave" : "enter") +
                              " intersection '" + node.id + "'");
      street_key = *s + 1;
    }

    std::size_t first = 0, last = 0;
    if (auto dash = minute_token.find('-'); dash != std::string::npos && dash > 0) {
      first = static_cast<std::size_t>(detail::parse_int(minute_token.substr(0, dash), line_no));
      last = static_cast<std::size_t>(detail::parse_int(minute_token.substr(dash + 1), line_no));
      if (last < first) throw ParseError(where() + "empty minute range");
    } else {
      const int m = detail::parse_int(minute_token, line_no);
      if (m < 0) throw ValidationError(where() + "minute index must be >= 0");
      first = last = static_cast<std::size_t>(m);
    }

    const double value = detail::parse_number(value_token, line_no);
    if (std::isnan(value) || value < 0.0)
      throw ValidationError(where() + "negative or invalid value '" + value_token + "'");
    if (std::isinf(value) && kind == FlowKind::Source)
      throw ValidationError(where() + "source demand must be finite");

    auto& series = data[Key{*k, street_key, kind == FlowKind::Source ? 0 : 1}];
    for (std::size_t m = first; m <= last; ++m) series[m] = value * scale;
    needed_minutes = std::max(needed_minutes, last + 1);
  }

  std::size_t minutes = declared_minutes.value_or(std::max<std::size_t>(needed_minutes, 1));
  if (declared_minutes && needed_minutes > *declared_minutes)
    throw ValidationError("schedule: minute index beyond declared minute count");

  std::vector<ScheduleSeries> series;
  for (const auto& [key, values] : data) {
    ScheduleSeries s;
    s.intersection = std::get<0>(key);
    if (std::get<1>(key) > 0) s.street = std::get<1>(key) - 1;
    s.kind = std::get<2>(key) == 0 ? FlowKind::Source : FlowKind::Sink;
    s.values.assign(minutes, 0.0);
    for (const auto& [m, v] : values) s.values[m] = v;
    series.push_back(std::move(s));
  }
  return DemandSchedule(minutes, std::move(series));
}

DemandSchedule load_schedule(const std::filesystem::path& path, const StreetNetwork& network) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schedule file '" + path.string() + "'");
  return parse_schedule(in, network);
}

std::vector<IntersectionIo> project_schedule(const StreetNetwork& network,
                                             const DemandSchedule& schedule, double gamma) {
  const std::size_t minutes = schedule.minutes();
  std::map<std::size_t, std::vector<const ScheduleSeries*>> by_node;
  for (const auto& s : schedule.series()) by_node[s.intersection].push_back(&s);

  std::vector<IntersectionIo> result;
  for (const auto& [k, list] : by_node) {
    IntersectionIo io;
    io.intersection = k;
    io.source_demand.assign(minutes, PerCardinal<double>{});
    io.sink_supply.assign(minutes, PerCardinal<double>{});
    for (std::size_t m = 0; m < minutes; ++m) {
      std::vector<StreetFlow> sources, sinks;
      for (const ScheduleSeries* s : list) {
        const double value = s->values[m];
        if (value == 0.0) continue;
        auto& target = s->kind == FlowKind::Source ? sources : sinks;
        if (s->street) {
          target.push_back({*s->street, value});
          continue;
        }
        const auto& streets =
            s->kind == FlowKind::Source ? network.outgoing(k) : network.incoming(k);
        double total_capacity = 0.0;
        for (std::size_t st : streets) total_capacity += network.street(st).capacity(gamma);
        for (std::size_t st : streets) {
          const double share = network.street(st).capacity(gamma) / total_capacity;
          target.push_back({st, std::isinf(value) ? value : value * share});
        }
      }
      const auto projected = project_io_demand(network, k, sources, sinks);
      io.source_demand[m] = projected.source_demand;
      io.sink_supply[m] = projected.sink_supply;
    }
    result.push_back(std::move(io));
  }
  return result;
}

}  // namespace news
