#pragma once

#include <optional>
#include <string>

#include "news/gridding.hpp"

namespace news {

enum class Scheme { Split, Unsplit };
enum class PositivityMode { NonStrict, Strict };

struct CflConfig {
  double c_adv = 0.5;
  /// Present iff every partial density must stay nonnegative (strict mode).
  std::optional<double> c_mix;
  double c_io = 1.0;
  double dt_cap = 60.0;            // s
  double output_interval = 900.0;  // s

  PositivityMode mode() const {
    return c_mix ? PositivityMode::Strict : PositivityMode::NonStrict;
  }
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Mixing CFL number the unsplit scheme uses when strict mode is off.
inline constexpr double kUnsplitMixingCfl = 1.0;

struct StepPlan {
  double dt_general = 0.0;
  double dt_io = 0.0;
  int subcycles = 1;  // K with dt_general = K * dt_io
  long steps_per_output = 1;
  double output_interval = 900.0;
  Scheme scheme = Scheme::Split;
  PositivityMode mode = PositivityMode::NonStrict;

  // Candidate restrictions before fitting; dt_mixing is 0 when not enforced.
  double dt_advection = 0.0;
  double dt_mixing = 0.0;
  double dt_io_restriction = 0.0;
  std::string binding;  // restriction that set dt_general (or "cap")
};

double dt_advection(const GridFields& fields, const Grid& grid, double c_adv);
double dt_mixing(const GridFields& fields, double c_mix);
double dt_io(const GridFields& fields, const PointSources& sources, double c_io,
             double epsilon = kDefaultEpsilon);

struct OutputFit {
  double dt = 0.0;
  long steps_per_output = 0;
};

/// Largest dt <= min(candidate, cap) that divides the output interval into
/// equal steps.
OutputFit fit_to_output(double candidate, double output_interval, double cap);

struct SubcycleFit {
  double dt_io = 0.0;
  int subcycles = 1;
};

SubcycleFit fit_subcycles(double dt_general, double dt_io_candidate);

StepPlan plan_steps(const Grid& grid, const GridFields& fields, const PointSources& sources,
                    const CflConfig& cfl, Scheme scheme, double epsilon = kDefaultEpsilon);

}  // namespace news
