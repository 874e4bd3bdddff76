#include "rcdelay/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "rcdelay/metrics.hpp"
#include "rcdelay/rng.hpp"

namespace rcdelay {

const char* to_string(TaskName name) {
  switch (name) {
    case TaskName::Narma10:
      return "narma10";
    case TaskName::MackeyGlass:
      return "mackey-glass";
    case TaskName::SpokenDigits:
      return "spoken-digits";
    case TaskName::Speakers:
      return "speakers";
  }
  return "?";
}

std::optional<TaskName> parse_task_name(const std::string& s) {
  for (TaskName n : {TaskName::Narma10, TaskName::MackeyGlass,
                     TaskName::SpokenDigits, TaskName::Speakers}) {
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

TaskPreset task_preset(TaskName name) {
  switch (name) {
    case TaskName::Narma10:
      return {name, 1.8, 0.4, {2.0, 15.0}, 1e-5, 50};
    case TaskName::MackeyGlass:
      return {name, 1.0, 0.0, {2.0, 15.0}, 1e-5, 50};
    case TaskName::SpokenDigits:
      return {name, 10.0, 0.0, {2.0}, 1e-5, 100};
    case TaskName::Speakers:
      return {name, 0.3, 0.8, {2.0}, 1e-5, 100};
  }
  throw ValidationError("unknown task preset");
}

AttenuationMap AttenuationMap::defaults() {
  return {{{2.0, 0.15}, {15.0, 1e-4}}};
}

void AttenuationMap::validate() const {
  require(anchors.size() >= 2, "attenuation map: need at least two anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    require(anchors[i].second > 0.0, "attenuation map: alpha must be > 0");
    if (i > 0) {
      require(anchors[i - 1].first < anchors[i].first,
              "attenuation map: anchors must have strictly ascending dB");
    }
  }
  bool has2 = false, has15 = false;
  for (const auto& [db, alpha] : anchors) {
    if (db == 2.0 && alpha == 0.15) has2 = true;
    if (db == 15.0 && alpha == 1e-4) has15 = true;
  }
  require(has2 && has15,
          "attenuation map: must contain the anchors (2 dB, 0.15) and "
          "(15 dB, 1e-4)");
}

namespace {

std::string anchor_list(const AttenuationMap& map) {
  std::ostringstream os;
  for (std::size_t i = 0; i < map.anchors.size(); ++i) {
    if (i) os << ", ";
    os << map.anchors[i].first << " dB -> " << map.anchors[i].second;
  }
  return os.str();
}

}  // namespace

AlphaLookup map_attenuation(double db, const AttenuationMap& map,
                            bool allow_extrapolation) {
  map.validate();
  for (const auto& [adb, alpha] : map.anchors) {
    if (db == adb) return {alpha, false};
  }
  std::size_t hi = 0;
  while (hi < map.anchors.size() && map.anchors[hi].first < db) ++hi;
  if (hi == 0 || hi == map.anchors.size()) {
    if (!allow_extrapolation) {
      throw ValidationError("attenuation " + std::to_string(db) +
                            " dB is outside the anchor range; known anchors: " +
                            anchor_list(map) +
                            " (enable extrapolation to override)");
    }
    hi = hi == 0 ? 1 : map.anchors.size() - 1;
  }
  const auto& [db0, a0] = map.anchors[hi - 1];
  const auto& [db1, a1] = map.anchors[hi];
  const double t = (db - db0) / (db1 - db0);
  const double alpha = std::exp(std::log(a0) + t * (std::log(a1) - std::log(a0)));
  return {alpha, true};
}

void ExperimentTask::validate() const {
  require(series.has_value() != utterances.has_value(),
          "experiment task: exactly one of series/utterances must be set");
  if (series) series->validate();
  if (utterances) {
    utterances->validate();
    if (protocol.kind == ClassificationProtocol::Kind::Resplit) {
      require(protocol.train_count >= 1,
              "experiment task: resplit protocol needs train_count >= 1");
    }
  }
}

long ExperimentTask::channels() const {
  return is_classification() ? utterances->channels() : 1;
}

std::vector<double> default_beta2_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 12; ++i) grid.push_back(0.25 * i);
  return grid;
}

std::vector<long> default_d_grid() {
  std::vector<long> grid(26);
  for (long i = 0; i < 26; ++i) grid[i] = i;
  return grid;
}

void parallel_for(long count, int threads,
                  const std::function<void(long)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = static_cast<int>(std::min<long>(threads, count));
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

// Task data that stays fixed across all grid cells.
struct PreparedTask {
  const ExperimentTask* task = nullptr;
  const InputSequence* input = nullptr;
  ConcatenatedStream stream;  // classification only
  SplitRanges ranges;         // series only
};

PreparedTask prepare(const ExperimentTask& task) {
  task.validate();
  PreparedTask p;
  p.task = &task;
  if (task.is_classification()) {
    p.stream = concatenate(*task.utterances);
    p.input = &p.stream.input;
  } else {
    p.ranges = apply_split(*task.series);
    p.input = &task.series->input;
  }
  return p;
}

double metric_from_states(const PreparedTask& p, const RowMatrixXd& states,
                          double ridge_lambda) {
  const ExperimentTask& task = *p.task;
  if (task.is_classification()) {
    const auto trainer = ridge_trainer(ridge_lambda);
    const auto& proto = task.protocol;
    EvalStats stats =
        proto.kind == ClassificationProtocol::Kind::Kfold
            ? kfold_evaluate(*task.utterances, proto.k, states, trainer)
            : random_resplit_evaluate(*task.utterances, proto.train_count,
                                      proto.repeats, proto.seed, states,
                                      trainer);
    return stats.mean;
  }

  const SeriesTask& series = *task.series;
  const IndexRange train = p.ranges.train;
  const IndexRange test = p.ranges.test;
  RowMatrixXd y_train(train.size(), 1);
  y_train.col(0) = series.target.segment(train.begin, train.size());
  const TrainedReadout readout = train_ridge(
      states.middleRows(train.begin, train.size()), y_train, ridge_lambda);
  const RowMatrixXd pred =
      predict(readout, states.middleRows(test.begin, test.size()));
  return nmse(pred.col(0), series.target.segment(test.begin, test.size()))
      .value;
}

struct CellParams {
  double alpha;
  double beta1;
  double beta2;
  long d;
  double bias_j0;
  double ridge_lambda;
};

double evaluate_cell(const PreparedTask& p, const MaskPair& masks,
                     const ScanSettings& settings, const CellParams& cell) {
  DelayedInputSpec spec;
  spec.beta1 = cell.beta1;
  spec.beta2 = cell.beta2;
  spec.delay_d = cell.d;
  spec.bias_j0 = cell.bias_j0;
  spec.masks = masks;

  ReservoirParams rp;
  rp.n_nodes = settings.n_nodes;
  rp.feedback_alpha = cell.alpha;
  rp.nonlinearity = settings.nonlinearity;

  const DriveMatrix drive = build_drive(*p.input, spec);
  const StateMatrix states = run(drive, rp, 0);
  return metric_from_states(p, states.data, cell.ridge_lambda);
}

}  // namespace

GridResult scan_beta2_delay(const ExperimentTask& task,
                            const ScanSettings& settings,
                            const std::vector<double>& beta2_grid,
                            const std::vector<long>& d_grid) {
  require(!beta2_grid.empty() && !d_grid.empty(), "scan: grids must be non-empty");
  require(std::find(beta2_grid.begin(), beta2_grid.end(), 0.0) !=
              beta2_grid.end(),
          "scan: beta2 grid must contain 0 (the no-delay baseline)");
  require(!settings.mask_seeds.empty(), "scan: need at least one mask seed");
  for (long d : d_grid) require(d >= 0, "scan: delays must be >= 0");

  const PreparedTask prepared = prepare(task);
  const long n_seeds = static_cast<long>(settings.mask_seeds.size());
  const long n_b = static_cast<long>(beta2_grid.size());
  const long n_d = static_cast<long>(d_grid.size());

  std::vector<MaskPair> masks;
  masks.reserve(n_seeds);
  for (std::uint64_t seed : settings.mask_seeds) {
    masks.push_back(generate_masks(settings.n_nodes,
                                   static_cast<int>(task.channels()), seed,
                                   settings.mask_distribution));
  }

  GridResult result;
  result.beta2_grid = beta2_grid;
  result.d_grid = d_grid;
  result.metric_name = task.metric_name();
  result.per_seed_surfaces.assign(n_seeds, RowMatrixXd::Zero(n_d, n_b));
  result.cell_seconds = RowMatrixXd::Zero(n_d, n_b);
  result.cell_seeds.assign(n_d, std::vector<std::uint64_t>(n_b, 0));
  for (long id = 0; id < n_d; ++id) {
    for (long ib = 0; ib < n_b; ++ib) {
      result.cell_seeds[id][ib] = mix_seed(settings.experiment_seed,
                                           static_cast<std::uint64_t>(ib),
                                           static_cast<std::uint64_t>(id));
    }
  }

  std::vector<double> seconds(n_seeds * n_d * n_b, 0.0);
  parallel_for(n_seeds * n_d * n_b, settings.parallelism, [&](long job) {
    const long is = job / (n_d * n_b);
    const long id = (job / n_b) % n_d;
    const long ib = job % n_b;
    CellParams cell{settings.alpha, settings.beta1, beta2_grid[ib],
                    d_grid[id],     settings.bias_j0, settings.ridge_lambda};
    const auto t0 = std::chrono::steady_clock::now();
    result.per_seed_surfaces[is](id, ib) =
        evaluate_cell(prepared, masks[is], settings, cell);
    seconds[job] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  });

  result.surface = RowMatrixXd::Zero(n_d, n_b);
  for (long is = 0; is < n_seeds; ++is) {
    result.surface += result.per_seed_surfaces[is];
    for (long id = 0; id < n_d; ++id) {
      for (long ib = 0; ib < n_b; ++ib) {
        result.cell_seconds(id, ib) += seconds[(is * n_d + id) * n_b + ib];
      }
    }
  }
  result.surface /= static_cast<double>(n_seeds);

  // argmin; ties resolve to the smallest d, then the smallest beta2
  result.best = {};
  result.best.metric = result.surface(0, 0);
  for (long id = 0; id < n_d; ++id) {
    for (long ib = 0; ib < n_b; ++ib) {
      if (result.surface(id, ib) < result.best.metric) {
        result.best.metric = result.surface(id, ib);
        result.best.i_d = id;
        result.best.i_beta2 = ib;
      }
    }
  }
  result.best.beta2 = beta2_grid[result.best.i_beta2];
  result.best.d = d_grid[result.best.i_d];
  return result;
}

double beta2_zero_baseline(const GridResult& grid) {
  for (std::size_t ib = 0; ib < grid.beta2_grid.size(); ++ib) {
    if (grid.beta2_grid[ib] == 0.0) {
      return grid.surface(0, static_cast<long>(ib));
    }
  }
  throw ValidationError("grid result has no beta2 = 0 column");
}

const char* to_string(SweepMode mode) {
  return mode == SweepMode::DelayedInput ? "delayed_input" : "standard_no_delay";
}

std::optional<SweepMode> parse_sweep_mode(const std::string& s) {
  if (s == "delayed_input") return SweepMode::DelayedInput;
  if (s == "standard_no_delay") return SweepMode::StandardNoDelay;
  return std::nullopt;
}

SweepCurve sweep_attenuation(const ExperimentTask& task,
                             const SweepSettings& settings, SweepMode mode,
                             const std::vector<double>& attenuation_grid_db) {
  require(!attenuation_grid_db.empty(), "sweep: attenuation grid is empty");
  require(!settings.beta1_factors.empty() && !settings.lambda_grid.empty(),
          "sweep: beta1/lambda grids must be non-empty");

  SweepCurve curve;
  curve.mode = mode;
  curve.metric_name = task.metric_name();

  const std::vector<double> beta2_grid =
      settings.beta2_grid.empty() ? default_beta2_grid() : settings.beta2_grid;
  const std::vector<long> d_grid =
      settings.d_grid.empty() ? default_d_grid() : settings.d_grid;

  for (double db : attenuation_grid_db) {
    const AlphaLookup lookup =
        map_attenuation(db, settings.attenuation, settings.allow_extrapolation);
    SweepPoint point;
    point.attenuation_db = db;
    point.alpha = lookup.alpha;
    point.interpolated = lookup.interpolated;

    if (mode == SweepMode::DelayedInput) {
      ScanSettings scan = settings.base;
      scan.alpha = lookup.alpha;
      const GridResult grid =
          scan_beta2_delay(task, scan, beta2_grid, d_grid);
      point.best_metric = grid.best.metric;
      point.beta2 = grid.best.beta2;
      point.d = grid.best.d;
      point.beta1 = settings.base.beta1;
      point.lambda = settings.base.ridge_lambda;
    } else {
      // beta2 = 0: tune (beta1, lambda) with alpha fixed by the sweep point.
      // Metrics are averaged over the same mask seeds the delayed mode uses.
      const PreparedTask prepared = prepare(task);
      const long n_seeds = static_cast<long>(settings.base.mask_seeds.size());
      bool first = true;
      for (double factor : settings.beta1_factors) {
        const double beta1 = factor * settings.base.beta1;
        std::vector<double> metric_sum(settings.lambda_grid.size(), 0.0);
        for (std::uint64_t seed : settings.base.mask_seeds) {
          DelayedInputSpec spec;
          spec.beta1 = beta1;
          spec.beta2 = 0.0;
          spec.delay_d = 0;
          spec.bias_j0 = settings.base.bias_j0;
          spec.masks = generate_masks(settings.base.n_nodes,
                                      static_cast<int>(task.channels()), seed,
                                      settings.base.mask_distribution);
          ReservoirParams rp;
          rp.n_nodes = settings.base.n_nodes;
          rp.feedback_alpha = lookup.alpha;
          rp.nonlinearity = settings.base.nonlinearity;
          // One reservoir run per (beta1, seed); lambda only retrains.
          const StateMatrix states =
              run(build_drive(*prepared.input, spec), rp, 0);
          for (std::size_t il = 0; il < settings.lambda_grid.size(); ++il) {
            metric_sum[il] +=
                metric_from_states(prepared, states.data,
                                   settings.lambda_grid[il]);
          }
        }
        for (std::size_t il = 0; il < settings.lambda_grid.size(); ++il) {
          const double metric = metric_sum[il] / static_cast<double>(n_seeds);
          if (first || metric < point.best_metric) {
            point.best_metric = metric;
            point.beta1 = beta1;
            point.lambda = settings.lambda_grid[il];
            first = false;
          }
        }
      }
      point.beta2 = 0.0;
      point.d = 0;
    }
    curve.points.push_back(point);
  }
  return curve;
}

}  // namespace rcdelay
