#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "news/gridding.hpp"
#include "news/solver.hpp"

namespace news {

/// One interior raster as written to disk: header `t nx ny dx dy`, then ny
/// comma-separated rows from south to north.
struct Frame {
  double t = 0.0;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  std::vector<double> values;  // row-major, south row first

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

/// Components written per output time: the four directions and their sum.
inline constexpr const char* kFrameComponents[] = {"N", "E", "W", "S", "sum"};

std::string frame_file_name(long index, const std::string& component);

Frame make_frame(const Grid& grid, const DensityState& state, int component);
void write_frame(std::ostream& out, const Frame& frame);
Frame read_frame(std::istream& in);
Frame read_frame(const std::filesystem::path& path);

/// Writes frame_<index>_{N,E,W,S,sum}.csv for the interior of `state`.
void write_frames(const std::filesystem::path& dir, long index, const Grid& grid,
                  const DensityState& state);

/// Frame files in `dir`, sorted by name.
std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir);

/// Ordered key = value record; parsing keeps insertion order.
class Summary {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, int value) { set(key, static_cast<long>(value)); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  const std::string* get(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_summary(std::ostream& out, const Summary& summary);
Summary read_summary(std::istream& in);

struct VehicleSample {
  double t = 0.0;
  double vehicles = 0.0;
  double injected = 0.0;
  double sunk = 0.0;
  double absorbed = 0.0;
};

void write_vehicle_series(std::ostream& out, const std::vector<VehicleSample>& samples);

}  // namespace news
