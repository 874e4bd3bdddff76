#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcdelay/optimizer.hpp"
#include "rcdelay/tasks.hpp"

namespace rcdelay {

/// Experiment configuration, parsed from JSON. Unknown keys are rejected;
/// to_json() emits every field so configs round-trip losslessly and result
/// files can embed a complete echo.
struct ExperimentConfig {
  // "narma10", "mackey-glass", or a path to an .rcds dataset file
  std::string task = "narma10";
  std::optional<std::string> preset;

  // preset overrides
  std::optional<double> beta1;
  std::optional<double> bias_j0;
  std::optional<double> ridge_lambda;
  std::optional<int> n_nodes;
  std::optional<double> alpha;           // wins over attenuation_db
  std::optional<double> attenuation_db;  // mapped through the anchor table
  std::string nonlinearity = "sine";
  std::string mask_distribution = "uniform01";

  // derive beta1/bias_j0 so the beta2=0 drive spans [lo, hi]
  std::optional<std::array<double, 2>> calibrate_range;

  Narma10Params narma{};
  MackeyGlassParams mackey_glass{};
  SplitSpec split{};

  std::vector<double> beta2_grid;  // empty = defaults
  std::vector<long> d_grid;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::uint64_t experiment_seed = 1;

  ClassificationProtocol protocol{};

  // sweep section
  std::vector<double> attenuation_grid_db{2.0, 15.0};
  std::vector<std::string> modes{"delayed_input", "standard_no_delay"};
  std::vector<double> beta1_factors{0.1, 0.3, 1.0, 3.0, 10.0};
  std::vector<double> lambda_grid{1e-7, 1e-5, 1e-3, 1e-1};
  std::vector<std::pair<double, double>> anchors;  // empty = defaults
  bool allow_extrapolation = false;

  std::string out_dir = "out";
  int parallelism = 0;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
};

/// Everything a scan or sweep needs, resolved from a config: the generated or
/// loaded task, fixed parameters, grids, and the config echo for the payload.
struct ResolvedExperiment {
  ExperimentTask task;
  ScanSettings scan;
  SweepSettings sweep;  // sweep.base == scan
  std::vector<double> beta2_grid;
  std::vector<long> d_grid;
  std::vector<double> attenuation_grid_db;
  std::vector<SweepMode> modes;
  nlohmann::ordered_json config_echo;
};

ResolvedExperiment resolve_experiment(const ExperimentConfig& config);

}  // namespace rcdelay
