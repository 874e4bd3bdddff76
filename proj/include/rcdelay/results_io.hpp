#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rcdelay/config.hpp"
#include "rcdelay/optimizer.hpp"

namespace rcdelay {

/// Runs scan_beta2_delay from a config and writes, under config.out_dir:
///   scan_result.json   deterministic payload (surface, best cell, config echo,
///                      per-cell seeds) — byte-identical across reruns
///   scan_heatmap.tsv   plot-ready table, rows = d, cols = beta2
///   scan_meta.json     timestamp and timings sidecar
struct ScanArtifacts {
  GridResult grid;
  std::filesystem::path result_path;
  std::filesystem::path heatmap_path;
  std::filesystem::path meta_path;
};

ScanArtifacts run_scan(const ExperimentConfig& config);

/// Runs sweep_attenuation for every configured mode and writes
/// sweep_result.json, sweep_curve_<mode>.tsv per mode, sweep_meta.json.
struct SweepArtifacts {
  std::vector<SweepCurve> curves;
  std::filesystem::path result_path;
  std::vector<std::filesystem::path> curve_paths;
  std::filesystem::path meta_path;
};

SweepArtifacts run_sweep(const ExperimentConfig& config);

/// Summary table over scan/sweep result payloads, grouped by task.
std::string run_report(const std::vector<std::filesystem::path>& result_paths);

}  // namespace rcdelay
