#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scootsim/errors.hpp"
#include "scootsim/scenario.hpp"
#include "scootsim/scenario_io.hpp"
#include "scootsim/simulation.hpp"
#include "scootsim/sweep.hpp"
#include "scootsim/trace_io.hpp"

namespace {

using nlohmann::json;

// Accepts either a path to a scenario JSON file or a built-in scenario name.
json scenario_doc(const std::string& spec) {
  std::ifstream f(spec);
  if (f) {
    json j;
    try {
      f >> j;
    } catch (const json::parse_error& e) {
      throw scootsim::InputError("invalid JSON in " + spec + ": " + e.what());
    }
    return j;
  }
  return scootsim::scenario_to_json(scootsim::builtin_scenario(spec));
}

scootsim::Scenario resolve_scenario(const std::string& spec,
                                    const std::vector<std::string>& overrides,
                                    bool seed_set, std::uint64_t seed) {
  json doc = scenario_doc(spec);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw scootsim::InputError("override must look like key=value: " + ov);
    scootsim::apply_override(doc, ov.substr(0, eq), ov.substr(eq + 1));
  }
  scootsim::Scenario sc = scootsim::scenario_from_json(doc);
  if (seed_set) sc.fault.rng_seed = seed;
  return sc;
}

int cmd_run(const std::string& spec, const std::vector<std::string>& overrides,
            bool seed_set, std::uint64_t seed, const std::string& out,
            const std::string& metrics_out) {
  const scootsim::Scenario sc = resolve_scenario(spec, overrides, seed_set, seed);
  const scootsim::RunResult r = scootsim::run(sc);
  if (!out.empty()) scootsim::write_trace_csv(out, r.trace);
  if (!metrics_out.empty()) scootsim::write_metrics_json(metrics_out, r.metrics);
  std::cout << scootsim::metrics_to_json(r.metrics).dump(2) << '\n';
  if (!r.ok) {
    std::cerr << "run aborted: " << r.error << '\n';
    return 1;
  }
  return r.metrics.collided ? 2 : 0;
}

int cmd_sweep(const std::string& spec, const std::vector<std::string>& overrides,
              bool seed_set, std::uint64_t seed, const std::string& grid_path,
              const std::string& out, int threads) {
  const scootsim::Scenario base = resolve_scenario(spec, overrides, seed_set, seed);
  std::ifstream f(grid_path);
  if (!f) throw scootsim::InputError("cannot open grid file: " + grid_path);
  json grid;
  try {
    f >> grid;
  } catch (const json::parse_error& e) {
    throw scootsim::InputError("invalid JSON in " + grid_path + ": " + e.what());
  }
  const auto axes = scootsim::sweep_axes_from_json(grid);
  const scootsim::SweepResult result = scootsim::sweep(base, axes, threads);
  if (!out.empty()) scootsim::write_sweep_csv(out, result);
  json summary{{"points", result.points.size()},
               {"collisions", result.collisions},
               {"failures", result.failures},
               {"worst_min_true_distance",
                std::isfinite(result.worst_min_true_distance)
                    ? json(result.worst_min_true_distance)
                    : json()}};
  std::cout << summary.dump(2) << '\n';
  if (result.failures > 0) return 1;
  return result.collisions > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic e-scooter collision-avoidance simulator"};
  app.require_subcommand(1);

  std::string spec;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  std::string out;
  std::string metrics_out;
  std::string grid_path;
  int threads = 0;
  std::string emit_name;

  CLI::App* run_cmd = app.add_subcommand(
      "run", "Run one scenario (JSON file path or built-in name)");
  run_cmd->add_option("scenario", spec, "Scenario file or built-in name")->required();
  CLI::Option* run_seed =
      run_cmd->add_option("--seed", seed, "Override the RNG seed");
  run_cmd->add_option("--out", out, "Write the trace CSV here");
  run_cmd->add_option("--metrics", metrics_out, "Write the metrics JSON here");
  run_cmd->add_option("--override", overrides,
                      "key=value scenario override (repeatable)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a grid of scenario variants");
  sweep_cmd->add_option("scenario", spec, "Scenario file or built-in name")->required();
  sweep_cmd->add_option("--grid", grid_path, "Grid JSON file")->required();
  sweep_cmd->add_option("--out", out, "Write the metrics table CSV here");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
  CLI::Option* sweep_seed =
      sweep_cmd->add_option("--seed", seed, "Override the base RNG seed");
  sweep_cmd->add_option("--override", overrides,
                        "key=value scenario override (repeatable)");

  CLI::App* scen_cmd = app.add_subcommand("scenarios", "Built-in scenarios");
  scen_cmd->require_subcommand(1);
  scen_cmd->add_subcommand("list", "List built-in scenario names");
  CLI::App* emit_cmd =
      scen_cmd->add_subcommand("emit", "Write a built-in scenario as JSON");
  emit_cmd->add_option("name", emit_name, "Built-in scenario name")->required();
  emit_cmd->add_option("--out", out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed())
      return cmd_run(spec, overrides, run_seed->count() > 0, seed, out,
                     metrics_out);
    if (sweep_cmd->parsed())
      return cmd_sweep(spec, overrides, sweep_seed->count() > 0, seed,
                       grid_path, out, threads);
    if (scen_cmd->parsed()) {
      if (scen_cmd->get_subcommand("list")->parsed()) {
        for (const std::string& name : scootsim::builtin_scenario_names())
          std::cout << name << '\n';
        return 0;
      }
      const scootsim::Scenario sc = scootsim::builtin_scenario(emit_name);
      if (out.empty())
        std::cout << scootsim::scenario_to_json(sc).dump(2) << '\n';
      else
        scootsim::save_scenario(out, sc);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
