#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "news/output.hpp"

namespace news {

struct FrameDiff {
  std::string name;
  double t = 0.0;
  double l1 = 0.0;        // sum |A - B| dx dy
  double linf = 0.0;      // max |A - B|
  double max_abs_a = 0.0;
  double relative = 0.0;  // linf / max |A|; 0 when both vanish
};

/// A - B cellwise. Throws ValidationError when shapes or times differ.
Frame difference(const Frame& a, const Frame& b);
FrameDiff diff_stats(const std::string& name, const Frame& a, const Frame& b);

struct CompareReport {
  std::vector<FrameDiff> frames;
  double max_relative = 0.0;
  double max_linf = 0.0;
};

/// Compares every frame of `dir_a` with its namesake in `dir_b`; when
/// `out_dir` is nonempty the difference rasters are written there.
CompareReport compare_frame_sets(const std::filesystem::path& dir_a,
                                 const std::filesystem::path& dir_b,
                                 const std::filesystem::path& out_dir = {});

/// Per-frame CSV table.
void write_compare_table(std::ostream& out, const CompareReport& report);

}  // namespace news
