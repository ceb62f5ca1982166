// hardylip: runs verification suites from a JSON config, lists presets and
// caches solved Schwarz-Christoffel maps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hardylip/harness.hpp"

namespace {

constexpr int exit_fail = 1;
constexpr int exit_config = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::string& suites,
            long long seed) {
  hardylip::ExperimentConfig config;
  try {
    hardylip::json j = hardylip::read_json_file(config_path);
    if (!suites.empty()) j["suites"] = split_list(suites);
    if (seed >= 0) j["seed"] = static_cast<std::uint64_t>(seed);
    config = hardylip::config_from_json(j);
  } catch (const hardylip::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  }
  const auto report = hardylip::run(config);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  hardylip::emit_csv(report, (fs::path(out_dir) / "report.csv").string());
  hardylip::emit_convergence_plotdata(report, (fs::path(out_dir) / "plotdata.csv").string());
  hardylip::write_text((fs::path(out_dir) / "report.json").string(), hardylip::report_json(report).dump(2) + "\n");
  std::size_t failed = 0;
  for (const auto& r : report.records) {
    if (!r.pass) {
      ++failed;
      std::fprintf(stderr, "FAIL %s %s %s = %s (tol %s) %s\n", r.suite.c_str(), r.anchor.c_str(), r.metric.c_str(),
                   hardylip::csv_number(r.value).c_str(), hardylip::csv_number(r.tolerance).c_str(),
                   r.inputs.c_str());
    }
  }
  std::printf("%zu records, %zu failed, %.1f s\n", report.records.size(), failed, report.wall_time);
  return failed == 0 ? 0 : exit_fail;
}

int cmd_presets() {
  for (const auto& name : hardylip::preset_names()) {
    std::printf("%s %s\n", name.c_str(), hardylip::curve_to_json(hardylip::preset_graph(name)).dump().c_str());
  }
  return 0;
}

int cmd_solve_map(const std::string& curve_path, const std::string& out_path) {
  hardylip::LipschitzGraph g;
  try {
    g = hardylip::curve_from_json(hardylip::read_json_file(curve_path));
  } catch (const hardylip::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  }
  try {
    const auto map = hardylip::sc_solve(g);
    for (const auto& w : map.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
    hardylip::write_text(out_path, hardylip::map_to_json(map).dump(2) + "\n");
    std::printf("residual %.3e\n", map.residual());
  } catch (const hardylip::MapError& e) {
    std::fprintf(stderr, "map error: %s\n", e.what());
    return exit_fail;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy spaces over Lipschitz graph domains"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", suites;
  long long seed = -1;
  auto* run = app.add_subcommand("run", "run verification suites from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "directory for report.csv, plotdata.csv, report.json");
  run->add_option("--suites", suites, "comma-separated suites overriding the config");
  run->add_option("--seed", seed, "seed overriding the config")->check(CLI::NonNegativeNumber);

  auto* presets = app.add_subcommand("presets", "list the preset curves");

  std::string curve_path, map_out;
  auto* solve = app.add_subcommand("solve-map", "solve the map parameters for a curve and cache them");
  solve->add_option("--curve", curve_path, "curve (JSON object or preset name string)")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", map_out, "output map JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : exit_config;
  }
  try {
    if (*run) return cmd_run(config_path, out_dir, suites, seed);
    if (*presets) return cmd_presets();
    if (*solve) return cmd_solve_map(curve_path, map_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_fail;
  }
  return 0;
}
