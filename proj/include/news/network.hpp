#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "news/common.hpp"

namespace news {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Intersection {
  std::string id;
  Vec2 position;
  bool is_entry = false;
  bool is_exit = false;

  friend bool operator==(const Intersection&, const Intersection&) = default;
};

/// A directed street. Two-way roads are two records.
struct Street {
  std::string id;
  std::size_t from = 0;  // intersection index
  std::size_t to = 0;
  double length = 0.0;  // m
  int lanes = 1;
  double v_max = 0.0;  // m/s
  /// Replaces the derived capacity v_max * rho_crit when present (veh/s).
  std::optional<double> capacity_override;
  /// to.position - from.position, filled in by StreetNetwork.
  Vec2 direction;

  /// Jam density in veh/m: one vehicle per kJamSpacing meters and lane.
  double rho_max() const { return static_cast<double>(lanes) / kJamSpacing; }
  double rho_crit(double gamma) const { return gamma * rho_max(); }
  /// Maximal flow Phi_max in veh/s.
  double capacity(double gamma) const {
    return capacity_override ? *capacity_override : v_max * rho_crit(gamma);
  }

  friend bool operator==(const Street&, const Street&) = default;
};

/// Measured turning ratios at one intersection, dense over
/// incoming x outgoing streets.
class TurningMatrix {
 public:
  TurningMatrix() = default;
  TurningMatrix(std::vector<std::size_t> incoming, std::vector<std::size_t> outgoing);

  const std::vector<std::size_t>& incoming() const { return incoming_; }
  const std::vector<std::size_t>& outgoing() const { return outgoing_; }

  /// Ratio by local row/column position.
  double operator()(std::size_t row, std::size_t col) const {
    return alpha_[row * outgoing_.size() + col];
  }
  double& operator()(std::size_t row, std::size_t col) {
    return alpha_[row * outgoing_.size() + col];
  }

  std::optional<std::size_t> row_of(std::size_t street) const;
  std::optional<std::size_t> col_of(std::size_t street) const;

  friend bool operator==(const TurningMatrix&, const TurningMatrix&) = default;

 private:
  std::vector<std::size_t> incoming_;
  std::vector<std::size_t> outgoing_;
  std::vector<double> alpha_;
};

struct TurningEntry {
  std::size_t intersection = 0;
  std::size_t in_street = 0;
  std::size_t out_street = 0;
  double alpha = 0.0;
};

struct BoundingBox {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
};

/// Validated, immutable street network. Construction throws ValidationError
/// on any violated invariant.
class StreetNetwork {
 public:
  StreetNetwork(std::vector<Intersection> intersections, std::vector<Street> streets,
                const std::vector<TurningEntry>& turning);

  const std::vector<Intersection>& intersections() const { return intersections_; }
  const std::vector<Street>& streets() const { return streets_; }
  const Intersection& intersection(std::size_t k) const { return intersections_.at(k); }
  const Street& street(std::size_t s) const { return streets_.at(s); }
  const TurningMatrix& turning(std::size_t k) const { return turning_.at(k); }

  const std::vector<std::size_t>& incoming(std::size_t k) const {
    return turning_.at(k).incoming();
  }
  const std::vector<std::size_t>& outgoing(std::size_t k) const {
    return turning_.at(k).outgoing();
  }

  const BoundingBox& bounding_box() const { return bbox_; }

  std::optional<std::size_t> find_intersection(std::string_view id) const;
  std::optional<std::size_t> find_street(std::string_view id) const;

  friend bool operator==(const StreetNetwork& a, const StreetNetwork& b) {
    return a.intersections_ == b.intersections_ && a.streets_ == b.streets_ &&
           a.turning_ == b.turning_;
  }

 private:
  std::vector<Intersection> intersections_;
  std::vector<Street> streets_;
  std::vector<TurningMatrix> turning_;
  BoundingBox bbox_;
  std::unordered_map<std::string, std::size_t> intersection_index_;
  std::unordered_map<std::string, std::size_t> street_index_;
};

/// Assembles a network by string ids; build() resolves ids and validates.
class NetworkBuilder {
 public:
  NetworkBuilder& intersection(std::string id, double x, double y, bool entry = false,
                               bool exit = false);
  NetworkBuilder& street(std::string id, std::string from, std::string to, double length,
                         int lanes, double v_max,
                         std::optional<double> capacity = std::nullopt);
  NetworkBuilder& turn(std::string at, std::string in_street, std::string out_street,
                       double alpha);

  StreetNetwork build() const;

 private:
  struct StreetSpec {
    std::string id, from, to;
    double length;
    int lanes;
    double v_max;
    std::optional<double> capacity;
  };
  struct TurnSpec {
    std::string at, in, out;
    double alpha;
  };
  std::vector<Intersection> intersections_;
  std::vector<StreetSpec> streets_;
  std::vector<TurnSpec> turns_;
};

/// Cosine and sine of the angle between (xi, eta) and the east axis.
struct Trig {
  double cos = 0.0;
  double sin = 0.0;
};

Trig street_trig(Vec2 direction);

/// Weights with which a street direction contributes to each cardinal
/// direction. All four are nonnegative and sum to one; the west and south
/// weights are stored as magnitudes.
PerCardinal<double> projection_coeffs(Vec2 direction);

StreetNetwork parse_network(std::istream& in);
StreetNetwork load_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const StreetNetwork& network);

}  // namespace news
