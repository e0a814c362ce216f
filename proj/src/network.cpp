#include "news/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "text_util.hpp"

namespace news {

namespace {

constexpr double kRowSumTolerance = 1e-9;

}  // namespace

TurningMatrix::TurningMatrix(std::vector<std::size_t> incoming,
                             std::vector<std::size_t> outgoing)
    : incoming_(std::move(incoming)),
      outgoing_(std::move(outgoing)),
      alpha_(incoming_.size() * outgoing_.size(), 0.0) {}

std::optional<std::size_t> TurningMatrix::row_of(std::size_t street) const {
  auto it = std::find(incoming_.begin(), incoming_.end(), street);
  if (it == incoming_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - incoming_.begin());
}

std::optional<std::size_t> TurningMatrix::col_of(std::size_t street) const {
  auto it = std::find(outgoing_.begin(), outgoing_.end(), street);
  if (it == outgoing_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - outgoing_.begin());
}

StreetNetwork::StreetNetwork(std::vector<Intersection> intersections,
                             std::vector<Street> streets,
                             const std::vector<TurningEntry>& turning)
    : intersections_(std::move(intersections)), streets_(std::move(streets)) {
  if (intersections_.empty()) throw ValidationError("network has no intersections");

  for (std::size_t k = 0; k < intersections_.size(); ++k) {
    const auto& node = intersections_[k];
    if (node.id.empty()) throw ValidationError("intersection with empty id");
    if (!std::isfinite(node.position.x) || !std::isfinite(node.position.y))
      throw ValidationError("intersection '" + node.id + "': position is not finite");
    if (!intersection_index_.emplace(node.id, k).second)
      throw ValidationError("duplicate intersection id '" + node.id + "'");
  }

  std::vector<std::vector<std::size_t>> in(intersections_.size());
  std::vector<std::vector<std::size_t>> out(intersections_.size());
  for (std::size_t s = 0; s < streets_.size(); ++s) {
    auto& st = streets_[s];
    const std::string where = "street '" + st.id + "'";
    if (st.id.empty()) throw ValidationError("street with empty id");
    if (!street_index_.emplace(st.id, s).second)
      throw ValidationError("duplicate street id '" + st.id + "'");
    if (st.from >= intersections_.size() || st.to >= intersections_.size())
      throw ValidationError(where + ": endpoint references unknown intersection");
    if (!(st.length > 0.0) || !std::isfinite(st.length))
      throw ValidationError(where + ": length must be positive");
    if (st.lanes < 1) throw ValidationError(where + ": lane count must be at least 1");
    if (!(st.v_max > 0.0) || !std::isfinite(st.v_max))
      throw ValidationError(where + ": maximal speed must be positive");
    if (st.capacity_override && !(*st.capacity_override > 0.0))
      throw ValidationError(where + ": capacity override must be positive");
    const Vec2 a = intersections_[st.from].position;
    const Vec2 b = intersections_[st.to].position;
    st.direction = {b.x - a.x, b.y - a.y};
    if (st.direction.x == 0.0 && st.direction.y == 0.0)
      throw ValidationError(where + ": endpoints coincide, direction is undefined");
    out[st.from].push_back(s);
    in[st.to].push_back(s);
  }

  turning_.reserve(intersections_.size());
  for (std::size_t k = 0; k < intersections_.size(); ++k)
    turning_.emplace_back(std::move(in[k]), std::move(out[k]));

  std::vector<std::vector<bool>> seen(intersections_.size());
  for (std::size_t k = 0; k < intersections_.size(); ++k)
    seen[k].assign(turning_[k].incoming().size() * turning_[k].outgoing().size(), false);
  std::vector<std::vector<bool>> row_given(intersections_.size());
  for (std::size_t k = 0; k < intersections_.size(); ++k)
    row_given[k].assign(turning_[k].incoming().size(), false);

  for (const auto& e : turning) {
    if (e.intersection >= intersections_.size())
      throw ValidationError("turning entry references unknown intersection");
    if (e.in_street >= streets_.size() || e.out_street >= streets_.size())
      throw ValidationError("turning entry references unknown street");
    const auto& node = intersections_[e.intersection];
    auto& table = turning_[e.intersection];
    auto row = table.row_of(e.in_street);
    auto col = table.col_of(e.out_street);
    if (!row)
      throw ValidationError("intersection '" + node.id + "': street '" +
                            streets_[e.in_street].id + "' does not end here");
    if (!col)
      throw ValidationError("intersection '" + node.id + "': street '" +
                            streets_[e.out_street].id + "' does not start here");
    if (!(e.alpha >= 0.0 && e.alpha <= 1.0))
      throw ValidationError("intersection '" + node.id + "': turning ratio from '" +
                            streets_[e.in_street].id + "' to '" +
                            streets_[e.out_street].id + "' outside [0, 1]");
    const std::size_t flat = *row * table.outgoing().size() + *col;
    if (seen[e.intersection][flat])
      throw ValidationError("intersection '" + node.id + "': duplicate turning ratio from '" +
                            streets_[e.in_street].id + "' to '" +
                            streets_[e.out_street].id + "'");
    seen[e.intersection][flat] = true;
    row_given[e.intersection][*row] = true;
    table(*row, *col) = e.alpha;
  }

  for (std::size_t k = 0; k < intersections_.size(); ++k) {
    const auto& node = intersections_[k];
    const auto& table = turning_[k];
    if (node.is_entry && table.outgoing().empty())
      throw ValidationError("entry intersection '" + node.id + "' has no outgoing street");
    if (node.is_exit && table.incoming().empty())
      throw ValidationError("exit intersection '" + node.id + "' has no incoming street");
    if (table.outgoing().empty()) continue;
    for (std::size_t r = 0; r < table.incoming().size(); ++r) {
      const std::string& street_id = streets_[table.incoming()[r]].id;
      if (!row_given[k][r]) {
        // Traffic that cannot continue has to leave the network here.
        if (node.is_exit) continue;
        throw ValidationError("intersection '" + node.id + "': no turning ratios for street '" +
                              street_id + "'");
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < table.outgoing().size(); ++c) sum += table(r, c);
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg << "intersection '" << node.id << "': turning ratios of street '" << street_id
            << "' sum to " << std::setprecision(12) << sum << ", expected 1";
        throw ValidationError(msg.str());
      }
    }
  }

  bbox_.min = bbox_.max = intersections_.front().position;
  for (const auto& node : intersections_) {
    bbox_.min.x = std::min(bbox_.min.x, node.position.x);
    bbox_.min.y = std::min(bbox_.min.y, node.position.y);
    bbox_.max.x = std::max(bbox_.max.x, node.position.x);
    bbox_.max.y = std::max(bbox_.max.y, node.position.y);
  }
}

std::optional<std::size_t> StreetNetwork::find_intersection(std::string_view id) const {
  auto it = intersection_index_.find(std::string(id));
  if (it == intersection_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> StreetNetwork::find_street(std::string_view id) const {
  auto it = street_index_.find(std::string(id));
  if (it == street_index_.end()) return std::nullopt;
  return it->second;
}

NetworkBuilder& NetworkBuilder::intersection(std::string id, double x, double y, bool entry,
                                             bool exit) {
  intersections_.push_back({std::move(id), {x, y}, entry, exit});
  return *this;
}

NetworkBuilder& NetworkBuilder::street(std::string id, std::string from, std::string to,
                                       double length, int lanes, double v_max,
                                       std::optional<double> capacity) {
  streets_.push_back({std::move(id), std::move(from), std::move(to), length, lanes, v_max,
                      capacity});
  return *this;
}

NetworkBuilder& NetworkBuilder::turn(std::string at, std::string in_street,
                                     std::string out_street, double alpha) {
  turns_.push_back({std::move(at), std::move(in_street), std::move(out_street), alpha});
  return *this;
}

StreetNetwork NetworkBuilder::build() const {
  std::map<std::string, std::size_t, std::less<>> node_ids;
  for (std::size_t k = 0; k < intersections_.size(); ++k)
    node_ids.emplace(intersections_[k].id, k);
  std::map<std::string, std::size_t, std::less<>> street_ids;
  for (std::size_t s = 0; s < streets_.size(); ++s) street_ids.emplace(streets_[s].id, s);

  auto node = [&](const std::string& id, const std::string& context) {
    auto it = node_ids.find(id);
    if (it == node_ids.end())
      throw ValidationError(context + ": unknown intersection '" + id + "'");
    return it->second;
  };
  auto street = [&](const std::string& id, const std::string& context) {
    auto it = street_ids.find(id);
    if (it == street_ids.end()) throw ValidationError(context + ": unknown street '" + id + "'");
    return it->second;
  };

  std::vector<Street> streets;
  streets.reserve(streets_.size());
  for (const auto& spec : streets_) {
    const std::string ctx = "street '" + spec.id + "'";
    Street st;
    st.id = spec.id;
    st.from = node(spec.from, ctx);
    st.to = node(spec.to, ctx);
    st.length = spec.length;
    st.lanes = spec.lanes;
    st.v_max = spec.v_max;
    st.capacity_override = spec.capacity;
    streets.push_back(std::move(st));
  }
  std::vector<TurningEntry> turning;
  turning.reserve(turns_.size());
  for (const auto& t : turns_) {
    const std::string ctx = "turning at '" + t.at + "'";
    turning.push_back({node(t.at, ctx), street(t.in, ctx), street(t.out, ctx), t.alpha});
  }
  return StreetNetwork(intersections_, std::move(streets), turning);
}

Trig street_trig(Vec2 direction) {
  const double norm = std::hypot(direction.x, direction.y);
  if (!(norm > 0.0)) throw ValidationError("direction vector has zero length");
  return {direction.x / norm, direction.y / norm};
}

PerCardinal<double> projection_coeffs(Vec2 direction) {
  const double l1 = std::abs(direction.x) + std::abs(direction.y);
  if (!(l1 > 0.0)) throw ValidationError("direction vector has zero length");
  PerCardinal<double> p{};
  p[index(Cardinal::N)] = std::max(direction.y, 0.0) / l1;
  p[index(Cardinal::E)] = std::max(direction.x, 0.0) / l1;
  p[index(Cardinal::W)] = -std::min(direction.x, 0.0) / l1;
  p[index(Cardinal::S)] = -std::min(direction.y, 0.0) / l1;
  return p;
}

namespace {

bool parse_flag(const std::string& token, std::size_t line) {
  if (token == "1" || token == "true" || token == "yes") return true;
  if (token == "0" || token == "false" || token == "no") return false;
  throw ParseError("line " + std::to_string(line) + ": expected flag 0/1, got '" + token + "'");
}

}  // namespace

StreetNetwork parse_network(std::istream& in) {
  NetworkBuilder builder;
  enum class Section { None, Intersections, Streets, Turning } section = Section::None;
  std::string turning_at;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = detail::tokenize(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string& head = tokens.front();
    if (head.front() == '[') {
      std::string header = raw.substr(raw.find('['));
      header = header.substr(0, header.find('#'));
      auto close = header.find(']');
      if (close == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
      auto words = detail::tokenize(header.substr(1, close - 1));
      if (words.size() == 1 && words[0] == "intersections") {
        section = Section::Intersections;
      } else if (words.size() == 1 && words[0] == "streets") {
        section = Section::Streets;
      } else if (words.size() == 2 && words[0] == "turning") {
        section = Section::Turning;
        turning_at = words[1];
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": unknown section '" + header +
                         "'");
      }
      continue;
    }
    switch (section) {
      case Section::None:
        throw ParseError("line " + std::to_string(line_no) + ": data outside of a section");
      case Section::Intersections:
        if (tokens.size() != 5)
          throw ParseError("line " + std::to_string(line_no) +
                           ": expected 'id x y entry exit'");
        builder.intersection(tokens[0], detail::parse_number(tokens[1], line_no),
                             detail::parse_number(tokens[2], line_no),
                             parse_flag(tokens[3], line_no), parse_flag(tokens[4], line_no));
        break;
      case Section::Streets: {
        if (tokens.size() != 6 && tokens.size() != 7)
          throw ParseError("line " + std::to_string(line_no) +
                           ": expected 'id from to length lanes vmax [capacity]'");
        std::optional<double> capacity;
        if (tokens.size() == 7) capacity = detail::parse_number(tokens[6], line_no);
        builder.street(tokens[0], tokens[1], tokens[2], detail::parse_number(tokens[3], line_no),
                       detail::parse_int(tokens[4], line_no),
                       detail::parse_number(tokens[5], line_no), capacity);
        break;
      }
      case Section::Turning:
        if (tokens.size() != 3)
          throw ParseError("line " + std::to_string(line_no) + ": expected 'in out alpha'");
        builder.turn(turning_at, tokens[0], tokens[1], detail::parse_number(tokens[2], line_no));
        break;
    }
  }
  return builder.build();
}

StreetNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file '" + path.string() + "'");
  return parse_network(in);
}

void write_network(std::ostream& out, const StreetNetwork& network) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const auto& nodes = network.intersections();
  out << "[intersections]\n# id x y entry exit\n";
  for (const auto& n : nodes)
    out << n.id << ' ' << n.position.x << ' ' << n.position.y << ' ' << (n.is_entry ? 1 : 0)
        << ' ' << (n.is_exit ? 1 : 0) << '\n';
  out << "\n[streets]\n# id from to length lanes vmax [capacity]\n";
  for (const auto& s : network.streets()) {
    out << s.id << ' ' << nodes[s.from].id << ' ' << nodes[s.to].id << ' ' << s.length << ' '
        << s.lanes << ' ' << s.v_max;
    if (s.capacity_override) out << ' ' << *s.capacity_override;
    out << '\n';
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& table = network.turning(k);
    bool header = false;
    for (std::size_t r = 0; r < table.incoming().size(); ++r) {
      for (std::size_t c = 0; c < table.outgoing().size(); ++c) {
        if (table(r, c) == 0.0) continue;
        if (!header) {
          out << "\n[turning " << nodes[k].id << "]\n";
          header = true;
        }
        out << network.street(table.incoming()[r]).id << ' '
            << network.street(table.outgoing()[c]).id << ' ' << table(r, c) << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace news
