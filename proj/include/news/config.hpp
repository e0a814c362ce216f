#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "news/gridding.hpp"
#include "news/solver.hpp"
#include "news/timestep.hpp"

namespace news {

/// Scenario description. Text form: one `key = value` per line, `#` starts
/// a comment; the run summary uses the same grammar.
struct RunConfig {
  std::filesystem::path network;
  std::optional<std::filesystem::path> schedule;  // absent: no boundary flow
  std::filesystem::path output = "out";

  GridSpec grid;
  CflConfig cfl;
  PositivityMode mode = PositivityMode::NonStrict;
  Scheme scheme = Scheme::Split;
  double horizon = 86400.0;  // s
  double gamma = kDefaultGamma;
  double mu = 0.02;  // 1/m
  double epsilon = kDefaultEpsilon;

  ViolationPolicy on_violation = ViolationPolicy::Fail;
  /// Off drops every sink series from the schedule.
  bool exits = true;
  /// Diagnostic only: wall turns off absorption through the ghost layer.
  BoundaryMode boundary = BoundaryMode::Absorbing;

  /// CFL settings with c_mix present exactly in strict mode.
  CflConfig effective_cfl() const;

  /// Throws ConfigError on inconsistent values or missing input files.
  void validate() const;
};

/// c_mix used in strict mode when the config does not set one.
inline constexpr double kDefaultStrictMixingCfl = 0.57;

/// Applies one `key = value` setting; relative paths resolve against `base`.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base);

/// Applies a `key=value` override string.
void apply_override(RunConfig& config, std::string_view assignment,
                    const std::filesystem::path& base);

RunConfig parse_config(std::istream& in, const std::filesystem::path& base);
RunConfig load_config(const std::filesystem::path& path);

void write_config(std::ostream& out, const RunConfig& config);

std::string to_string(Scheme scheme);
std::string to_string(PositivityMode mode);

}  // namespace news
