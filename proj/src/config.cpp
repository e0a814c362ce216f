#include "news/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "text_util.hpp"

namespace news {

namespace {

double number(std::string_view key, std::string_view value) {
  try {
    return detail::parse_number(value, 0);
  } catch (const ParseError&) {
    throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(value) +
                      "'");
  }
}

int integer(std::string_view key, std::string_view value) {
  try {
    return detail::parse_int(value, 0);
  } catch (const ParseError&) {
    throw ConfigError("'" + std::string(key) + "' expects an integer, got '" +
                      std::string(value) + "'");
  }
}

bool on_off(std::string_view key, std::string_view value) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw ConfigError("'" + std::string(key) + "' expects on or off, got '" + std::string(value) +
                    "'");
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

CflConfig RunConfig::effective_cfl() const {
  CflConfig c = cfl;
  if (mode == PositivityMode::Strict) {
    if (!c.c_mix) c.c_mix = kDefaultStrictMixingCfl;
  } else {
    c.c_mix.reset();
  }
  return c;
}

void RunConfig::validate() const {
  effective_cfl().validate();
  if (network.empty()) throw ConfigError("config needs a network file");
  if (!std::filesystem::exists(network))
    throw ConfigError("network file '" + network.string() + "' does not exist");
  if (schedule && !std::filesystem::exists(*schedule))
    throw ConfigError("schedule file '" + schedule->string() + "' does not exist");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  const double ratio = horizon / cfl.output_interval;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw ConfigError("horizon must be a multiple of output_interval");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (grid.pad < 0 || grid.ghost < 1) throw ConfigError("pad must be >= 0 and ghost >= 1");
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value,
                   const std::filesystem::path& base) {
  if (key == "network") {
    c.network = resolve(value, base);
  } else if (key == "schedule") {
    if (value == "none" || value.empty())
      c.schedule.reset();
    else
      c.schedule = resolve(value, base);
  } else if (key == "output") {
    c.output = resolve(value, base);
  } else if (key == "nx") {
    c.grid.cells_x = integer(key, value);
    c.grid.spacing.reset();
  } else if (key == "ny") {
    c.grid.cells_y = integer(key, value);
    c.grid.spacing.reset();
  } else if (key == "spacing") {
    c.grid.spacing = number(key, value);
    c.grid.cells_x.reset();
    c.grid.cells_y.reset();
  } else if (key == "pad") {
    c.grid.pad = integer(key, value);
  } else if (key == "ghost") {
    c.grid.ghost = integer(key, value);
  } else if (key == "c_adv") {
    c.cfl.c_adv = number(key, value);
  } else if (key == "c_mix") {
    if (value == "none")
      c.cfl.c_mix.reset();
    else
      c.cfl.c_mix = number(key, value);
  } else if (key == "c_io") {
    c.cfl.c_io = number(key, value);
  } else if (key == "dt_cap") {
    c.cfl.dt_cap = number(key, value);
  } else if (key == "output_interval") {
    c.cfl.output_interval = number(key, value);
  } else if (key == "mode") {
    if (value == "strict")
      c.mode = PositivityMode::Strict;
    else if (value == "non-strict" || value == "nonstrict")
      c.mode = PositivityMode::NonStrict;
    else
      throw ConfigError("mode must be strict or non-strict");
  } else if (key == "scheme") {
    if (value == "split")
      c.scheme = Scheme::Split;
    else if (value == "unsplit")
      c.scheme = Scheme::Unsplit;
    else
      throw ConfigError("scheme must be split or unsplit");
  } else if (key == "horizon") {
    c.horizon = number(key, value);
  } else if (key == "gamma") {
    c.gamma = number(key, value);
  } else if (key == "mu") {
    c.mu = number(key, value);
  } else if (key == "epsilon") {
    c.epsilon = number(key, value);
  } else if (key == "on_violation") {
    if (value == "fail")
      c.on_violation = ViolationPolicy::Fail;
    else if (value == "clamp")
      c.on_violation = ViolationPolicy::Clamp;
    else
      throw ConfigError("on_violation must be fail or clamp");
  } else if (key == "exits") {
    c.exits = on_off(key, value);
  } else if (key == "boundary") {
    if (value == "absorbing")
      c.boundary = BoundaryMode::Absorbing;
    else if (value == "wall")
      c.boundary = BoundaryMode::Wall;
    else
      throw ConfigError("boundary must be absorbing or wall");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_override(RunConfig& config, std::string_view assignment,
                    const std::filesystem::path& base) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  apply_setting(config, detail::trim(assignment.substr(0, eq)),
                detail::trim(assignment.substr(eq + 1)), base);
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base) {
  RunConfig c;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), base);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::string to_string(Scheme scheme) { return scheme == Scheme::Split ? "split" : "unsplit"; }

std::string to_string(PositivityMode mode) {
  return mode == PositivityMode::Strict ? "strict" : "non-strict";
}

void write_config(std::ostream& out, const RunConfig& c) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "network = " << c.network.string() << '\n';
  out << "schedule = " << (c.schedule ? c.schedule->string() : std::string("none")) << '\n';
  out << "output = " << c.output.string() << '\n';
  if (c.grid.spacing) {
    out << "spacing = " << *c.grid.spacing << '\n';
  } else {
    if (c.grid.cells_x) out << "nx = " << *c.grid.cells_x << '\n';
    if (c.grid.cells_y) out << "ny = " << *c.grid.cells_y << '\n';
  }
  out << "pad = " << c.grid.pad << '\n';
  out << "ghost = " << c.grid.ghost << '\n';
  out << "mode = " << to_string(c.mode) << '\n';
  out << "scheme = " << to_string(c.scheme) << '\n';
  out << "c_adv = " << c.cfl.c_adv << '\n';
  if (c.cfl.c_mix) out << "c_mix = " << *c.cfl.c_mix << '\n';
  out << "c_io = " << c.cfl.c_io << '\n';
  out << "dt_cap = " << c.cfl.dt_cap << '\n';
  out << "output_interval = " << c.cfl.output_interval << '\n';
  out << "horizon = " << c.horizon << '\n';
  out << "gamma = " << c.gamma << '\n';
  out << "mu = " << c.mu << '\n';
  out << "epsilon = " << c.epsilon << '\n';
  out << "on_violation = " << (c.on_violation == ViolationPolicy::Fail ? "fail" : "clamp")
      << '\n';
  out << "exits = " << (c.exits ? "on" : "off") << '\n';
  out << "boundary = " << (c.boundary == BoundaryMode::Absorbing ? "absorbing" : "wall") << '\n';
  out.precision(old_precision);
}

}  // namespace news
