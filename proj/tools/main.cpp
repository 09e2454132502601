// lvs: runs the named location-verification experiments and writes
// <scenario>.csv plus <scenario>.manifest.json into --out-dir.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "config.hpp"
#include "scenarios.hpp"

#ifndef LVS_VERSION
#define LVS_VERSION "v0.1.0"
#endif

namespace fs = std::filesystem;
using namespace lvs;
using namespace lvs::cli;

namespace {

struct RunFlags {
  std::string scenario;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::optional<double> rho_factor;
  std::string out_dir = ".";
  std::vector<std::string> sets;
};

// Write to a sibling temp file, then rename into place.
void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

int run(const RunFlags& flags) {
  const Scenario* scenario = find_scenario(flags.scenario);
  if (!scenario) {
    std::cerr << "error: unknown scenario '" << flags.scenario
              << "' (see `lvs list`)\n";
    return 2;
  }

  ExperimentConfig config;
  KeyValues kv;
  try {
    config = fig3_defaults();
    scenario->defaults(config);
    if (!flags.config_path.empty()) kv = KeyValues::from_file(flags.config_path);
    for (const auto& s : flags.sets) kv.set(s);
    if (!flags.config_path.empty() || scenario->name == "custom") {
      require_keys(kv, required_keys());
    }
    if (flags.seed) kv.put("sim.seed", std::to_string(*flags.seed));
    if (flags.trials) kv.put("sim.trials", std::to_string(*flags.trials));
    if (flags.threads) kv.put("sim.threads", std::to_string(*flags.threads));
    config = apply(kv, config);
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return 2;
  }

  const fs::path dir(flags.out_dir);
  const fs::path csv_path = dir / (scenario->name + ".csv");
  const fs::path manifest_path = dir / (scenario->name + ".manifest.json");

  const auto start = std::chrono::steady_clock::now();
  ScenarioRun result;
  try {
    fs::create_directories(dir);
    // A stale manifest must not vouch for outputs this run may not finish.
    fs::remove(manifest_path);
    result = scenario->run(config, ScenarioOptions{flags.rho_factor});
    write_atomically(csv_path, format_csv(result.table));
  } catch (const std::exception& e) {
    std::cerr << "error: " << scenario->name << " failed: " << e.what() << "\n";
    return 1;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json manifest;
  manifest["scenario"] = scenario->name;
  manifest["version"] = LVS_VERSION;
  manifest["seed"] = config.seed;
  manifest["config_hash"] = config_hash(config);
  manifest["config"] = describe(config);
  manifest["overrides"] = kv.values();
  if (flags.rho_factor) manifest["rho_factor"] = *flags.rho_factor;
  manifest["notes"] = result.notes;
  manifest["wall_time_s"] = wall;
  manifest["outputs"] = {csv_path.filename().string()};
  try {
    write_atomically(manifest_path, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << csv_path.string() << " (" << result.table.rows.size()
            << " rows, " << wall << " s)\n";
  for (const auto& n : result.notes) std::cout << "  " << n << "\n";
  return 0;
}

void list() {
  for (const auto& s : scenarios()) {
    std::printf("%-9s %s\n", s.name.c_str(), s.summary.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Location verification experiments"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  run_cmd->add_option("--scenario", flags.scenario, "scenario name")->required();
  run_cmd->add_option("--config", flags.config_path, "INI-style config file")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", flags.seed, "master seed (default 42)");
  run_cmd->add_option("--trials", flags.trials, "trials per hypothesis");
  run_cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
  run_cmd->add_option("--out-dir", flags.out_dir, "output directory")->capture_default_str();
  run_cmd->add_option("--set", flags.sets, "override, e.g. channel.sigma_dB=5")
      ->take_all();
  run_cmd->add_option("--rho-factor", flags.rho_factor, "fig5/fig6: rho as a multiple of rho*");

  app.add_subcommand("list", "list scenarios");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("list")) {
    list();
    return 0;
  }
  return run(flags);
}
