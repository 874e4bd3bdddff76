#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcdelay/dataset_io.hpp"
#include "rcdelay/results_io.hpp"

namespace {

using namespace rcdelay;

void apply_common_overrides(ExperimentConfig& config, const std::string& out,
                            const std::string& preset, long long seed,
                            int parallelism) {
  if (!out.empty()) config.out_dir = out;
  if (!preset.empty()) config.preset = preset;
  if (seed >= 0) config.experiment_seed = static_cast<std::uint64_t>(seed);
  if (parallelism > 0) config.parallelism = parallelism;
}

void maybe_export_text(const DatasetPayload& payload,
                       const std::string& text_out) {
  if (!text_out.empty()) {
    export_dataset_text(payload, text_out);
    std::printf("wrote %s\n", text_out.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rcdelay: discrete-time delay-based reservoir computing simulator with "
      "delayed-input (beta2, d) optimization"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "Write a benchmark dataset");
  generate->require_subcommand(1);

  std::string gen_out = "dataset.rcds";
  std::string gen_text_out;
  long long gen_seed = 1;

  Narma10Params narma;
  auto* gen_narma = generate->add_subcommand("narma10", "NARMA10 series");
  gen_narma->add_option("--length", narma.length, "series length");
  gen_narma->add_option("--seed", gen_seed, "input seed");
  gen_narma->add_option("--lo", narma.input_lo, "input lower bound");
  gen_narma->add_option("--hi", narma.input_hi, "input upper bound");
  gen_narma->add_option("--target-shift", narma.target_shift,
                        "target(n) = q(n + shift); 0 or 1");
  gen_narma->add_flag("--printed-summand", narma.printed_summand,
                      "use the ten-times-q(n-1) recursion variant");
  gen_narma->add_option("--out", gen_out, "output .rcds path");
  gen_narma->add_option("--text-out", gen_text_out, "also write a TSV dump");

  MackeyGlassParams mg;
  auto* gen_mg = generate->add_subcommand("mackey-glass",
                                          "Mackey-Glass forecast series");
  gen_mg->add_option("--length", mg.length, "series length");
  gen_mg->add_option("--horizon", mg.horizon, "forecast steps ahead");
  gen_mg->add_option("--substeps", mg.substeps, "integrator steps per sample");
  gen_mg->add_option("--transient", mg.transient_samples,
                     "discarded leading samples");
  gen_mg->add_option("--history", mg.history_value, "constant history value");
  gen_mg->add_option("--tau", mg.mg_tau, "delay tau");
  gen_mg->add_option("--out", gen_out, "output .rcds path");
  gen_mg->add_option("--text-out", gen_text_out, "also write a TSV dump");

  SyntheticUtteranceParams sep;
  auto* gen_sep = generate->add_subcommand(
      "synthetic-utterances", "separable synthetic classification set");
  gen_sep->add_option("--classes", sep.n_classes, "number of classes");
  gen_sep->add_option("--count", sep.count, "number of utterances");
  gen_sep->add_option("--min-len", sep.min_len, "minimum utterance length");
  gen_sep->add_option("--max-len", sep.max_len, "maximum utterance length");
  gen_sep->add_option("--seed", gen_seed, "generator seed");
  gen_sep->add_option("--out", gen_out, "output .rcds path");
  gen_sep->add_option("--text-out", gen_text_out, "also write a TSV dump");

  TemporalContextParams ctx;
  auto* gen_ctx = generate->add_subcommand(
      "temporal-context",
      "classification set whose classes need the d*-lagged input");
  gen_ctx->add_option("--context-lag", ctx.context_lag, "the lag d*");
  gen_ctx->add_option("--count", ctx.count, "number of utterances");
  gen_ctx->add_option("--length", ctx.length, "utterance length");
  gen_ctx->add_option("--seed", gen_seed, "generator seed");
  gen_ctx->add_option("--out", gen_out, "output .rcds path");
  gen_ctx->add_option("--text-out", gen_text_out, "also write a TSV dump");

  // ---- scan / sweep ----
  std::string config_path, out_dir, preset;
  long long seed = -1;
  int parallelism = 0;

  auto* scan = app.add_subcommand(
      "scan", "(beta2, d) grid scan from a JSON config");
  scan->add_option("--config", config_path, "config file")->required();
  scan->add_option("--out", out_dir, "output directory (overrides config)");
  scan->add_option("--preset", preset, "task preset (overrides config)");
  scan->add_option("--seed", seed, "experiment seed (overrides config)");
  scan->add_option("--parallelism", parallelism, "worker threads");

  auto* sweep = app.add_subcommand(
      "sweep", "attenuation sweep comparing optimization modes");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out_dir, "output directory (overrides config)");
  sweep->add_option("--preset", preset, "task preset (overrides config)");
  sweep->add_option("--seed", seed, "experiment seed (overrides config)");
  sweep->add_option("--parallelism", parallelism, "worker threads");

  // ---- report ----
  std::vector<std::string> report_paths;
  auto* report = app.add_subcommand("report", "summarize result files");
  report->add_option("results", report_paths, "result .json paths")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) {
      if (gen_narma->parsed()) {
        narma.input_seed = static_cast<std::uint64_t>(gen_seed);
        narma.split = default_split_for_length(narma.length);
        save_dataset(generate_narma10(narma), gen_out);
      } else if (gen_mg->parsed()) {
        mg.split = default_split_for_length(mg.length);
        save_dataset(generate_mackey_glass(mg), gen_out);
      } else if (gen_sep->parsed()) {
        sep.seed = static_cast<std::uint64_t>(gen_seed);
        save_dataset(generate_separable_utterances(sep), gen_out);
      } else {
        ctx.seed = static_cast<std::uint64_t>(gen_seed);
        save_dataset(generate_temporal_context_utterances(ctx), gen_out);
      }
      std::printf("wrote %s\n", gen_out.c_str());
      maybe_export_text(load_dataset(gen_out), gen_text_out);
    } else if (scan->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
      apply_common_overrides(config, out_dir, preset, seed, parallelism);
      const ScanArtifacts artifacts = run_scan(config);
      std::printf("best %s %.6g at beta2=%g d=%ld (baseline beta2=0: %.6g)\n",
                  artifacts.grid.metric_name.c_str(),
                  artifacts.grid.best.metric, artifacts.grid.best.beta2,
                  artifacts.grid.best.d, beta2_zero_baseline(artifacts.grid));
      std::printf("wrote %s\nwrote %s\nwrote %s\n",
                  artifacts.result_path.string().c_str(),
                  artifacts.heatmap_path.string().c_str(),
                  artifacts.meta_path.string().c_str());
    } else if (sweep->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
      apply_common_overrides(config, out_dir, preset, seed, parallelism);
      const SweepArtifacts artifacts = run_sweep(config);
      for (const SweepCurve& curve : artifacts.curves) {
        std::printf("%s:", to_string(curve.mode));
        for (const SweepPoint& p : curve.points) {
          std::printf("  %gdB -> %.6g", p.attenuation_db, p.best_metric);
        }
        std::printf("\n");
      }
      std::printf("wrote %s\n", artifacts.result_path.string().c_str());
      for (const auto& path : artifacts.curve_paths) {
        std::printf("wrote %s\n", path.string().c_str());
      }
      std::printf("wrote %s\n", artifacts.meta_path.string().c_str());
    } else if (report->parsed()) {
      std::vector<std::filesystem::path> paths(report_paths.begin(),
                                               report_paths.end());
      std::fputs(run_report(paths).c_str(), stdout);
    }
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
