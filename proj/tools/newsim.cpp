// newsim: command line front end for the NEWS traffic simulator.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "news/compare.hpp"
#include "news/config.hpp"
#include "news/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kValidation = 3, kSimulation = 4 };

news::RunConfig load_with_overrides(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  news::RunConfig config = news::load_config(path);
  for (const auto& o : overrides) news::apply_override(config, o, std::filesystem::current_path());
  return config;
}

int simulate(const std::string& config_path, const std::vector<std::string>& overrides) {
  const auto config = load_with_overrides(config_path, overrides);
  const auto result = news::run(config);
  std::cout << "dt_general = " << result.plan.dt_general << " s, dt_io = " << result.plan.dt_io
            << " s, K = " << result.plan.subcycles << ", steps = " << result.steps << '\n';
  std::cout << "vehicles at end = " << result.samples.back().vehicles << '\n';
  std::cout << "output written to " << config.output.string() << '\n';
  return kOk;
}

int compare(const std::string& a, const std::string& b, const std::string& out) {
  const auto report = news::compare_frame_sets(a, b, out);
  news::write_compare_table(std::cout, report);
  std::cout << "max_relative = " << report.max_relative << '\n';
  std::cout << "max_linf = " << report.max_linf << '\n';
  if (!out.empty()) {
    std::ofstream table(std::filesystem::path(out) / "report.csv");
    news::write_compare_table(table, report);
  }
  return kOk;
}

int params(const std::string& config_path, const std::vector<std::string>& overrides,
           const std::string& dump_dir) {
  const auto config = load_with_overrides(config_path, overrides);
  const auto scenario = news::build_scenario(config);
  news::write_params_table(std::cout, scenario.network, scenario.params);
  std::cerr << "grid " << scenario.grid.nx << " x " << scenario.grid.ny << ", dx = "
            << scenario.grid.dx << ", dy = " << scenario.grid.dy << '\n'
            << "dt_advection = " << scenario.plan.dt_advection
            << ", dt_mixing = ";
  if (scenario.plan.dt_mixing > 0.0)
    std::cerr << scenario.plan.dt_mixing;
  else
    std::cerr << "unused";
  std::cerr
            << ", dt_io = " << scenario.plan.dt_io_restriction << ", K = "
            << scenario.plan.subcycles << " (" << scenario.plan.binding << " binding)\n";
  if (!dump_dir.empty()) news::dump_fields(dump_dir, scenario.grid, scenario.fields);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-dimensional NEWS traffic simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* sim_cmd = app.add_subcommand("simulate", "run a scenario and write frames");
  sim_cmd->add_option("--config", config_path, "scenario file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--set", overrides, "override a config key, key=value");

  std::string dir_a, dir_b, diff_out;
  auto* cmp_cmd = app.add_subcommand("compare", "difference report between two frame sets");
  cmp_cmd->add_option("dir_a", dir_a, "reference frames")->required();
  cmp_cmd->add_option("dir_b", dir_b, "frames to compare")->required();
  cmp_cmd->add_option("--out", diff_out, "directory for difference rasters and report.csv");

  std::string dump_dir;
  bool dump = false;
  auto* par_cmd = app.add_subcommand("params", "print compiled intersection parameters");
  par_cmd->add_option("--config", config_path, "scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  par_cmd->add_option("--set", overrides, "override a config key, key=value");
  auto* dump_opt = par_cmd->add_flag("--dump", dump, "also write the parameter rasters");
  par_cmd->add_option("--dir", dump_dir, "raster directory (default <output>/params)")
      ->needs(dump_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim_cmd) return simulate(config_path, overrides);
    if (*cmp_cmd) return compare(dir_a, dir_b, diff_out);
    if (*par_cmd) {
      if (dump && dump_dir.empty())
        dump_dir = (load_with_overrides(config_path, overrides).output / "params").string();
      return params(config_path, overrides, dump ? dump_dir : std::string());
    }
  } catch (const news::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const news::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const news::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const news::SimulationError& e) {
    std::cerr << "simulation failed: " << e.what() << '\n';
    return kSimulation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
