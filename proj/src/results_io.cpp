#include "rcdelay/results_io.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

namespace rcdelay {

namespace {

using nlohmann::ordered_json;

constexpr int kResultVersion = 1;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

ordered_json matrix_to_json(const RowMatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (long i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ValidationError("results: cannot open for writing: " + path.string());
  }
  out << content;
  if (!out) throw ValidationError("results: write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string timestamp_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json resolved_json(const ScanSettings& s) {
  ordered_json r;
  r["alpha"] = s.alpha;
  r["beta1"] = s.beta1;
  r["bias_j0"] = s.bias_j0;
  r["ridge_lambda"] = s.ridge_lambda;
  r["n_nodes"] = s.n_nodes;
  r["nonlinearity"] = s.nonlinearity == Nonlinearity::Sine      ? "sine"
                      : s.nonlinearity == Nonlinearity::Tanh    ? "tanh"
                                                                : "identity";
  return r;
}

std::string heatmap_tsv(const GridResult& grid) {
  std::ostringstream os;
  os << "# metric: " << grid.metric_name << "\n";
  os << "d\\beta2";
  for (double b : grid.beta2_grid) os << '\t' << format_double(b);
  os << '\n';
  for (std::size_t id = 0; id < grid.d_grid.size(); ++id) {
    os << grid.d_grid[id];
    for (std::size_t ib = 0; ib < grid.beta2_grid.size(); ++ib) {
      os << '\t'
         << format_double(grid.surface(static_cast<long>(id),
                                       static_cast<long>(ib)));
    }
    os << '\n';
  }
  return os.str();
}

std::string curve_tsv(const SweepCurve& curve, const std::string& task) {
  std::ostringstream os;
  os << "# task: " << task << "\tmode: " << to_string(curve.mode)
     << "\tmetric: " << curve.metric_name << "\n";
  os << "attenuation_db\talpha\tbest_metric\tbeta2\td\tbeta1\tlambda\n";
  for (const SweepPoint& p : curve.points) {
    os << format_double(p.attenuation_db) << '\t' << format_double(p.alpha)
       << '\t' << format_double(p.best_metric) << '\t' << format_double(p.beta2)
       << '\t' << p.d << '\t' << format_double(p.beta1) << '\t'
       << format_double(p.lambda) << '\n';
  }
  return os.str();
}

}  // namespace

ScanArtifacts run_scan(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ResolvedExperiment exp = resolve_experiment(config);
  ScanArtifacts artifacts;
  artifacts.grid =
      scan_beta2_delay(exp.task, exp.scan, exp.beta2_grid, exp.d_grid);
  const GridResult& grid = artifacts.grid;

  ordered_json payload;
  payload["format_version"] = kResultVersion;
  payload["kind"] = "scan";
  payload["task"] = exp.task.label;
  payload["metric"] = grid.metric_name;
  payload["config"] = exp.config_echo;
  payload["resolved"] = resolved_json(exp.scan);
  payload["beta2_grid"] = grid.beta2_grid;
  payload["d_grid"] = grid.d_grid;
  payload["seeds"] = exp.scan.mask_seeds;
  payload["surface"] = matrix_to_json(grid.surface);
  ordered_json per_seed = ordered_json::array();
  for (const RowMatrixXd& s : grid.per_seed_surfaces) {
    per_seed.push_back(matrix_to_json(s));
  }
  payload["per_seed_surfaces"] = std::move(per_seed);
  payload["cell_seeds"] = grid.cell_seeds;
  payload["best"] = {{"beta2", grid.best.beta2},
                     {"d", grid.best.d},
                     {"metric", grid.best.metric}};
  payload["baseline_beta2_zero"] = beta2_zero_baseline(grid);

  const std::filesystem::path out_dir = config.out_dir;
  artifacts.result_path = out_dir / "scan_result.json";
  artifacts.heatmap_path = out_dir / "scan_heatmap.tsv";
  artifacts.meta_path = out_dir / "scan_meta.json";
  write_json_file(artifacts.result_path, payload);
  write_text_file(artifacts.heatmap_path, heatmap_tsv(grid));

  ordered_json meta;
  meta["timestamp"] = timestamp_now();
  meta["total_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  meta["cell_seconds"] = matrix_to_json(grid.cell_seconds);
  write_json_file(artifacts.meta_path, meta);
  return artifacts;
}

SweepArtifacts run_sweep(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ResolvedExperiment exp = resolve_experiment(config);
  require(!exp.modes.empty(), "sweep: no modes configured");

  SweepArtifacts artifacts;
  for (SweepMode mode : exp.modes) {
    artifacts.curves.push_back(sweep_attenuation(exp.task, exp.sweep, mode,
                                                 exp.attenuation_grid_db));
  }

  ordered_json payload;
  payload["format_version"] = kResultVersion;
  payload["kind"] = "sweep";
  payload["task"] = exp.task.label;
  payload["metric"] = artifacts.curves.front().metric_name;
  payload["config"] = exp.config_echo;
  payload["resolved"] = resolved_json(exp.scan);
  payload["attenuation_grid_db"] = exp.attenuation_grid_db;
  ordered_json curves = ordered_json::array();
  for (const SweepCurve& curve : artifacts.curves) {
    ordered_json c;
    c["mode"] = to_string(curve.mode);
    ordered_json points = ordered_json::array();
    for (const SweepPoint& p : curve.points) {
      points.push_back({{"attenuation_db", p.attenuation_db},
                        {"alpha", p.alpha},
                        {"interpolated", p.interpolated},
                        {"best_metric", p.best_metric},
                        {"beta2", p.beta2},
                        {"d", p.d},
                        {"beta1", p.beta1},
                        {"lambda", p.lambda}});
    }
    c["points"] = std::move(points);
    curves.push_back(std::move(c));
  }
  payload["curves"] = std::move(curves);

  const std::filesystem::path out_dir = config.out_dir;
  artifacts.result_path = out_dir / "sweep_result.json";
  artifacts.meta_path = out_dir / "sweep_meta.json";
  write_json_file(artifacts.result_path, payload);
  for (const SweepCurve& curve : artifacts.curves) {
    const std::filesystem::path path =
        out_dir / ("sweep_curve_" + std::string(to_string(curve.mode)) +
                   ".tsv");
    write_text_file(path, curve_tsv(curve, exp.task.label));
    artifacts.curve_paths.push_back(path);
  }

  ordered_json meta;
  meta["timestamp"] = timestamp_now();
  meta["total_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_json_file(artifacts.meta_path, meta);
  return artifacts;
}

namespace {

struct ReportRow {
  std::string task;
  std::string kind;
  std::string mode;
  std::string metric;
  double best = 0.0;
  std::string params;
  std::string runtime;
};

std::string meta_runtime(const std::filesystem::path& result_path) {
  std::string name = result_path.filename().string();
  const std::string suffix = "_result.json";
  if (name.size() < suffix.size() ||
      name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return "-";
  }
  name.replace(name.size() - suffix.size(), suffix.size(), "_meta.json");
  const std::filesystem::path meta = result_path.parent_path() / name;
  std::ifstream in(meta);
  if (!in) return "-";
  try {
    const auto j = nlohmann::json::parse(in);
    return format_short(j.at("total_seconds").get<double>());
  } catch (const nlohmann::json::exception&) {
    return "-";
  }
}

}  // namespace

std::string run_report(
    const std::vector<std::filesystem::path>& result_paths) {
  require(!result_paths.empty(), "report: no result files given");

  std::vector<ReportRow> rows;
  for (const auto& path : result_paths) {
    std::ifstream in(path);
    if (!in) throw ValidationError("report: cannot open " + path.string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("report: " + path.string() + ": " + e.what());
    }
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != kResultVersion) {
      throw ValidationError("report: incompatible result version in " +
                            path.string());
    }
    const std::string kind = j.at("kind").get<std::string>();
    const std::string runtime = meta_runtime(path);
    if (kind == "scan") {
      ReportRow row;
      row.task = j.at("task").get<std::string>();
      row.kind = "scan";
      row.mode = "delayed_input";
      row.metric = j.at("metric").get<std::string>();
      row.best = j.at("best").at("metric").get<double>();
      row.params = "beta2=" + format_short(j.at("best").at("beta2").get<double>()) +
                   " d=" + std::to_string(j.at("best").at("d").get<long>());
      row.runtime = runtime;
      rows.push_back(std::move(row));
    } else if (kind == "sweep") {
      for (const auto& curve : j.at("curves")) {
        ReportRow row;
        row.task = j.at("task").get<std::string>();
        row.kind = "sweep";
        row.mode = curve.at("mode").get<std::string>();
        row.metric = j.at("metric").get<std::string>();
        const nlohmann::json* best_point = nullptr;
        for (const auto& p : curve.at("points")) {
          if (!best_point || p.at("best_metric").get<double>() <
                                 best_point->at("best_metric").get<double>()) {
            best_point = &p;
          }
        }
        require(best_point != nullptr, "report: sweep curve has no points");
        row.best = best_point->at("best_metric").get<double>();
        const double db = best_point->at("attenuation_db").get<double>();
        if (row.mode == "delayed_input") {
          row.params = "db=" + format_short(db) + " beta2=" +
                       format_short(best_point->at("beta2").get<double>()) +
                       " d=" + std::to_string(best_point->at("d").get<long>());
        } else {
          row.params = "db=" + format_short(db) + " beta1=" +
                       format_short(best_point->at("beta1").get<double>()) +
                       " lambda=" +
                       format_short(best_point->at("lambda").get<double>());
        }
        row.runtime = runtime;
        rows.push_back(std::move(row));
      }
    } else {
      throw ValidationError("report: unknown result kind in " + path.string());
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) {
                     return a.task < b.task;
                   });

  std::ostringstream os;
  const char* fmt = "%-16s %-6s %-19s %-11s %-12s %-28s %s\n";
  char line[256];
  std::snprintf(line, sizeof(line), fmt, "task", "kind", "mode", "metric",
                "best", "params", "runtime_s");
  os << line;
  for (const ReportRow& row : rows) {
    std::snprintf(line, sizeof(line), fmt, row.task.c_str(), row.kind.c_str(),
                  row.mode.c_str(), row.metric.c_str(),
                  format_short(row.best).c_str(), row.params.c_str(),
                  row.runtime.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace rcdelay
