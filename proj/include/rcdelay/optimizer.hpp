#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcdelay/common.hpp"
#include "rcdelay/masking.hpp"
#include "rcdelay/readout.hpp"
#include "rcdelay/reservoir.hpp"
#include "rcdelay/tasks.hpp"

namespace rcdelay {

enum class TaskName { Narma10, MackeyGlass, SpokenDigits, Speakers };

const char* to_string(TaskName name);
std::optional<TaskName> parse_task_name(const std::string& s);

/// Fixed per-task input/reservoir parameters. Only (beta2, d) are scanned.
struct TaskPreset {
  TaskName name;
  double beta1;
  double bias_j0;
  std::vector<double> attenuation_db_options;
  double ridge_lambda;
  int n_nodes;
};

TaskPreset task_preset(TaskName name);

/// Attenuation (dB) -> feedback alpha anchor table. Lookups between anchors
/// interpolate log-linearly in (dB, log alpha); listed anchors are exact.
struct AttenuationMap {
  std::vector<std::pair<double, double>> anchors;  // (dB, alpha), dB ascending

  static AttenuationMap defaults();
  void validate() const;
};

struct AlphaLookup {
  double alpha = 0.0;
  bool interpolated = false;
};

AlphaLookup map_attenuation(double db, const AttenuationMap& map,
                            bool allow_extrapolation = false);

struct ClassificationProtocol {
  enum class Kind { Kfold, Resplit };
  Kind kind = Kind::Kfold;
  int k = 10;
  int train_count = 0;  // Resplit only
  int repeats = 10;     // Resplit only
  std::uint64_t seed = 1;
};

/// A benchmark plus its evaluation protocol: either a series task (NMSE on
/// the test split) or an utterance dataset (mean error rate under kfold or
/// random resplits).
struct ExperimentTask {
  std::string label;
  std::optional<SeriesTask> series;
  std::optional<UtteranceDataset> utterances;
  ClassificationProtocol protocol{};

  bool is_classification() const { return utterances.has_value(); }
  const char* metric_name() const {
    return is_classification() ? "error_rate" : "nmse";
  }
  void validate() const;
  long channels() const;
};

struct ScanSettings {
  double alpha = 0.15;
  Nonlinearity nonlinearity = Nonlinearity::Sine;
  double beta1 = 1.0;
  double bias_j0 = 0.0;
  double ridge_lambda = 1e-5;
  int n_nodes = 50;
  MaskDistribution mask_distribution = MaskDistribution::Uniform01;
  std::vector<std::uint64_t> mask_seeds{1, 2, 3};
  std::uint64_t experiment_seed = 1;
  int parallelism = 0;  // 0 = hardware concurrency
};

struct GridResult {
  std::vector<double> beta2_grid;
  std::vector<long> d_grid;
  std::string metric_name;
  // Metric surfaces indexed (i_d, i_beta2); `surface` is the mean over the
  // mask seeds, per-seed surfaces are kept alongside.
  RowMatrixXd surface;
  std::vector<RowMatrixXd> per_seed_surfaces;
  std::vector<std::vector<std::uint64_t>> cell_seeds;
  RowMatrixXd cell_seconds;  // wall time per cell, summed over seeds

  struct Best {
    long i_beta2 = 0;
    long i_d = 0;
    double beta2 = 0.0;
    long d = 0;
    double metric = 0.0;
  } best;
};

std::vector<double> default_beta2_grid();  // 0, 0.25, ..., 3.0
std::vector<long> default_d_grid();        // 0, 1, ..., 25

/// Evaluates the task metric over the (beta2, d) grid with everything else
/// fixed. Masks and task data are identical across cells; the beta2 grid must
/// contain 0 so the no-delay baseline is part of every scan.
GridResult scan_beta2_delay(const ExperimentTask& task,
                            const ScanSettings& settings,
                            const std::vector<double>& beta2_grid,
                            const std::vector<long>& d_grid);

/// Metric of the beta2 = 0 column (constant across d by construction).
double beta2_zero_baseline(const GridResult& grid);

enum class SweepMode { DelayedInput, StandardNoDelay };

const char* to_string(SweepMode mode);
std::optional<SweepMode> parse_sweep_mode(const std::string& s);

struct SweepPoint {
  double attenuation_db = 0.0;
  double alpha = 0.0;
  bool interpolated = false;
  double best_metric = 0.0;
  // arg-best parameters; (beta2, d) for DelayedInput, (beta1, lambda) for
  // StandardNoDelay. The fixed values are echoed in the other pair.
  double beta2 = 0.0;
  long d = 0;
  double beta1 = 0.0;
  double lambda = 0.0;
};

struct SweepCurve {
  SweepMode mode;
  std::string metric_name;
  std::vector<SweepPoint> points;
};

struct SweepSettings {
  ScanSettings base;
  std::vector<double> beta2_grid;  // empty = defaults (DelayedInput mode)
  std::vector<long> d_grid;
  std::vector<double> beta1_factors{0.1, 0.3, 1.0, 3.0, 10.0};
  std::vector<double> lambda_grid{1e-7, 1e-5, 1e-3, 1e-1};
  AttenuationMap attenuation = AttenuationMap::defaults();
  bool allow_extrapolation = false;
};

/// DelayedInput: fixed preset parameters, (beta2, d) optimized by scan at
/// each attenuation. StandardNoDelay: beta2 = 0 and (beta1, lambda) grid
/// search, alpha given by the sweep point.
SweepCurve sweep_attenuation(const ExperimentTask& task,
                             const SweepSettings& settings, SweepMode mode,
                             const std::vector<double>& attenuation_grid_db);

/// Runs fn(0..count-1) on up to `threads` workers; any exception rethrows.
void parallel_for(long count, int threads,
                  const std::function<void(long)>& fn);

}  // namespace rcdelay
