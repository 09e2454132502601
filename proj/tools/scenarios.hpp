#pragma once

// Named experiments. Each scenario starts from its own defaults, then the
// config file and --set overrides are layered on top by the runner.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lvs/simulator.hpp"

namespace lvs::cli {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row then one line per row, '\n' terminated, 9 significant digits.
std::string format_csv(const Table& table);

struct ScenarioOptions {
  std::optional<double> rho_factor;  // fig5 only: run a single rho / rho*
};

struct ScenarioRun {
  Table table;
  std::vector<std::string> notes;
};

struct Scenario {
  std::string name;
  std::string summary;
  std::function<void(ExperimentConfig&)> defaults;
  std::function<ScenarioRun(const ExperimentConfig&, const ScenarioOptions&)> run;
};

const std::vector<Scenario>& scenarios();
const Scenario* find_scenario(const std::string& name);

/// Fig-3 baseline: far-field attacker, K=10 random stations, sigma 5 dB,
/// gamma 3, P0 0.9, 10,000 trials, seed 42.
ExperimentConfig fig3_defaults();

// Pieces shared with the acceptance suite.
struct OptimumSummary {
  double log_threshold = 0.0;
  double nmi = 0.0;
  double nmi_se = 0.0;
};
OptimumSummary nmi_optimum(const SweepResult& sweep, const PriorParams& priors);

inline const std::vector<double> kFig4Sigmas = {2, 4, 6, 8, 10};
inline const std::vector<std::size_t> kFig4Counts = {4, 6, 8, 10};
inline const std::vector<double> kFig5RhoFactors = {0.2, 0.5, 1.0};
inline const std::vector<double> kFig6OuterRatios = {1, 2, 5, 10};
inline const std::vector<std::size_t> kFig7Counts = {4, 8};

}  // namespace lvs::cli
