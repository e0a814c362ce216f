#include "news/compare.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace news {

Frame difference(const Frame& a, const Frame& b) {
  if (a.nx != b.nx || a.ny != b.ny || a.values.size() != b.values.size())
    throw ValidationError("frame shapes differ: " + std::to_string(a.nx) + "x" +
                          std::to_string(a.ny) + " vs " + std::to_string(b.nx) + "x" +
                          std::to_string(b.ny));
  if (a.t != b.t)
    throw ValidationError("frame times differ: " + std::to_string(a.t) + " vs " +
                          std::to_string(b.t));
  Frame d = a;
  for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] = a.values[k] - b.values[k];
  return d;
}

FrameDiff diff_stats(const std::string& name, const Frame& a, const Frame& b) {
  const Frame d = difference(a, b);
  FrameDiff s;
  s.name = name;
  s.t = a.t;
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    const double e = std::abs(d.values[k]);
    s.l1 += e;
    s.linf = std::max(s.linf, e);
    s.max_abs_a = std::max(s.max_abs_a, std::abs(a.values[k]));
  }
  s.l1 *= a.dx * a.dy;
  if (s.max_abs_a > 0.0)
    s.relative = s.linf / s.max_abs_a;
  else
    s.relative = s.linf > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return s;
}

CompareReport compare_frame_sets(const std::filesystem::path& dir_a,
                                 const std::filesystem::path& dir_b,
                                 const std::filesystem::path& out_dir) {
  const auto frames_a = list_frames(dir_a);
  const auto frames_b = list_frames(dir_b);
  if (frames_a.empty()) throw ValidationError("no frames in '" + dir_a.string() + "'");
  if (frames_a.size() != frames_b.size())
    throw ValidationError("frame sets differ in size: " + std::to_string(frames_a.size()) +
                          " vs " + std::to_string(frames_b.size()));
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  CompareReport report;
  for (const auto& pa : frames_a) {
    const auto name = pa.filename();
    const auto pb = dir_b / name;
    if (!std::filesystem::exists(pb))
      throw ValidationError("'" + pb.string() + "' missing from the second frame set");
    const Frame a = read_frame(pa);
    const Frame b = read_frame(pb);
    auto stats = diff_stats(name.string(), a, b);
    if (!out_dir.empty()) {
      std::ofstream out(out_dir / name);
      if (!out) throw ConfigError("cannot write '" + (out_dir / name).string() + "'");
      write_frame(out, difference(a, b));
    }
    report.max_relative = std::max(report.max_relative, stats.relative);
    report.max_linf = std::max(report.max_linf, stats.linf);
    report.frames.push_back(std::move(stats));
  }
  return report;
}

void write_compare_table(std::ostream& out, const CompareReport& report) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "frame,t,l1,linf,max_abs_a,relative\n";
  for (const auto& f : report.frames)
    out << f.name << ',' << f.t << ',' << f.l1 << ',' << f.linf << ',' << f.max_abs_a << ','
        << f.relative << '\n';
  out.precision(old_precision);
}

}  // namespace news
