#include "news/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "text_util.hpp"

namespace news {

std::string frame_file_name(long index, const std::string& component) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04ld_", index);
  return buf + component + ".csv";
}

Frame make_frame(const Grid& grid, const DensityState& state, int component) {
  Frame f;
  f.t = state.t;
  f.nx = grid.nx;
  f.ny = grid.ny;
  f.dx = grid.dx;
  f.dy = grid.dy;
  f.values.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
  for (int j = grid.ghost; j < grid.ghost + grid.ny; ++j) {
    for (int i = grid.ghost; i < grid.ghost + grid.nx; ++i) {
      if (component < 4) {
        f.values.push_back(state.rho[component](i, j));
      } else {
        // Fixed N, E, W, S summation order keeps frames reproducible.
        f.values.push_back(state.rho[0](i, j) + state.rho[1](i, j) + state.rho[2](i, j) +
                           state.rho[3](i, j));
      }
    }
  }
  return f;
}

void write_frame(std::ostream& out, const Frame& frame) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << frame.t << ' ' << frame.nx << ' ' << frame.ny << ' ' << frame.dx << ' ' << frame.dy
      << '\n';
  for (int j = 0; j < frame.ny; ++j) {
    for (int i = 0; i < frame.nx; ++i) {
      if (i > 0) out << ',';
      out << frame.at(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

Frame read_frame(std::istream& in) {
  Frame f;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("frame: missing header");
  ++line_no;
  const auto head = detail::tokenize(line);
  if (head.size() != 5) throw ParseError("frame header must be 't nx ny dx dy'");
  f.t = detail::parse_number(head[0], line_no);
  f.nx = detail::parse_int(head[1], line_no);
  f.ny = detail::parse_int(head[2], line_no);
  f.dx = detail::parse_number(head[3], line_no);
  f.dy = detail::parse_number(head[4], line_no);
  if (f.nx < 1 || f.ny < 1) throw ParseError("frame dimensions must be positive");
  f.values.reserve(static_cast<std::size_t>(f.nx) * f.ny);
  for (int j = 0; j < f.ny; ++j) {
    if (!std::getline(in, line)) throw ParseError("frame: expected " + std::to_string(f.ny) +
                                                  " rows, got " + std::to_string(j));
    ++line_no;
    const auto row = detail::tokenize(line);
    if (static_cast<int>(row.size()) != f.nx)
      throw ParseError("frame line " + std::to_string(line_no) + ": expected " +
                       std::to_string(f.nx) + " values");
    for (const auto& tok : row) f.values.push_back(detail::parse_number(tok, line_no));
  }
  return f;
}

Frame read_frame(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open frame '" + path.string() + "'");
  try {
    return read_frame(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_frames(const std::filesystem::path& dir, long index, const Grid& grid,
                  const DensityState& state) {
  std::filesystem::create_directories(dir);
  for (int c = 0; c < 5; ++c) {
    const auto path = dir / frame_file_name(index, kFrameComponents[c]);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    write_frame(out, make_frame(grid, state, c));
  }
}

std::vector<std::filesystem::path> list_frames(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("frame_", 0) == 0 &&
        entry.path().extension() == ".csv")
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Summary::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void Summary::set(const std::string& key, double value) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << value;
  set(key, s.str());
}

void Summary::set(const std::string& key, long value) { set(key, std::to_string(value)); }

const std::string* Summary::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

void write_summary(std::ostream& out, const Summary& summary) {
  for (const auto& [k, v] : summary.entries()) out << k << " = " << v << '\n';
}

Summary read_summary(std::istream& in) {
  Summary s;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("summary line without '='");
    s.set(std::string(detail::trim(line.substr(0, eq))),
          std::string(detail::trim(line.substr(eq + 1))));
  }
  return s;
}

void write_vehicle_series(std::ostream& out, const std::vector<VehicleSample>& samples) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "t,vehicles,injected,sunk,absorbed\n";
  for (const auto& s : samples)
    out << s.t << ',' << s.vehicles << ',' << s.injected << ',' << s.sunk << ',' << s.absorbed
        << '\n';
  out.precision(old_precision);
}

}  // namespace news
