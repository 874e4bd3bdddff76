#include "rcdelay/config.hpp"

#include <fstream>
#include <set>

#include "rcdelay/dataset_io.hpp"

namespace rcdelay {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(std::string("config: unknown key '") + key +
                            "' at " + where);
    }
  }
}

template <typename T>
void read_field(const json& obj, const char* key, const char* where, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config: bad value for '") + key +
                          "' at " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, const char* where,
                std::optional<T>& out) {
  if (!obj.contains(key)) return;
  T v{};
  read_field(obj, key, where, v);
  out = v;
}

void parse_split(const json& obj, SplitSpec& split) {
  check_keys(obj, "$.split", {"washout1", "train_len", "washout2", "test_len"});
  read_field(obj, "washout1", "$.split", split.washout1);
  read_field(obj, "train_len", "$.split", split.train_len);
  read_field(obj, "washout2", "$.split", split.washout2);
  read_field(obj, "test_len", "$.split", split.test_len);
}

void parse_protocol(const json& obj, ClassificationProtocol& proto) {
  check_keys(obj, "$.protocol", {"kind", "k", "train_count", "repeats", "seed"});
  std::string kind = "kfold";
  read_field(obj, "kind", "$.protocol", kind);
  if (kind == "kfold") {
    proto.kind = ClassificationProtocol::Kind::Kfold;
  } else if (kind == "resplit") {
    proto.kind = ClassificationProtocol::Kind::Resplit;
  } else {
    throw ValidationError("config: protocol kind must be kfold or resplit");
  }
  read_field(obj, "k", "$.protocol", proto.k);
  read_field(obj, "train_count", "$.protocol", proto.train_count);
  read_field(obj, "repeats", "$.protocol", proto.repeats);
  read_field(obj, "seed", "$.protocol", proto.seed);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: root must be an object");
  check_keys(j, "$",
             {"task", "preset", "overrides", "calibrate_range", "task_params",
              "split", "grid", "seeds", "experiment_seed", "protocol", "sweep",
              "out_dir", "parallelism"});

  ExperimentConfig c;
  read_field(j, "task", "$", c.task);
  read_field(j, "preset", "$", c.preset);

  if (j.contains("overrides")) {
    const json& o = j.at("overrides");
    check_keys(o, "$.overrides",
               {"beta1", "bias_j0", "ridge_lambda", "n_nodes", "alpha",
                "attenuation_db", "nonlinearity", "mask_distribution"});
    read_field(o, "beta1", "$.overrides", c.beta1);
    read_field(o, "bias_j0", "$.overrides", c.bias_j0);
    read_field(o, "ridge_lambda", "$.overrides", c.ridge_lambda);
    read_field(o, "n_nodes", "$.overrides", c.n_nodes);
    read_field(o, "alpha", "$.overrides", c.alpha);
    read_field(o, "attenuation_db", "$.overrides", c.attenuation_db);
    read_field(o, "nonlinearity", "$.overrides", c.nonlinearity);
    read_field(o, "mask_distribution", "$.overrides", c.mask_distribution);
  }

  if (j.contains("calibrate_range")) {
    std::array<double, 2> range{};
    read_field(j, "calibrate_range", "$", range);
    c.calibrate_range = range;
  }

  if (j.contains("split")) parse_split(j.at("split"), c.split);

  if (j.contains("task_params")) {
    const json& t = j.at("task_params");
    check_keys(t, "$.task_params",
               {"length", "input_seed", "input_lo", "input_hi", "target_shift",
                "printed_summand", "mg_beta", "mg_tau", "mg_exponent",
                "mg_gamma", "sample_dt", "substeps", "history_value",
                "transient_samples", "horizon"});
    read_field(t, "length", "$.task_params", c.narma.length);
    read_field(t, "input_seed", "$.task_params", c.narma.input_seed);
    read_field(t, "input_lo", "$.task_params", c.narma.input_lo);
    read_field(t, "input_hi", "$.task_params", c.narma.input_hi);
    read_field(t, "target_shift", "$.task_params", c.narma.target_shift);
    read_field(t, "printed_summand", "$.task_params", c.narma.printed_summand);
    read_field(t, "length", "$.task_params", c.mackey_glass.length);
    read_field(t, "mg_beta", "$.task_params", c.mackey_glass.mg_beta);
    read_field(t, "mg_tau", "$.task_params", c.mackey_glass.mg_tau);
    read_field(t, "mg_exponent", "$.task_params", c.mackey_glass.mg_exponent);
    read_field(t, "mg_gamma", "$.task_params", c.mackey_glass.mg_gamma);
    read_field(t, "sample_dt", "$.task_params", c.mackey_glass.sample_dt);
    read_field(t, "substeps", "$.task_params", c.mackey_glass.substeps);
    read_field(t, "history_value", "$.task_params",
               c.mackey_glass.history_value);
    read_field(t, "transient_samples", "$.task_params",
               c.mackey_glass.transient_samples);
    read_field(t, "horizon", "$.task_params", c.mackey_glass.horizon);
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "$.grid", {"beta2", "d"});
    read_field(g, "beta2", "$.grid", c.beta2_grid);
    read_field(g, "d", "$.grid", c.d_grid);
  }

  read_field(j, "seeds", "$", c.seeds);
  read_field(j, "experiment_seed", "$", c.experiment_seed);
  if (j.contains("protocol")) parse_protocol(j.at("protocol"), c.protocol);

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, "$.sweep",
               {"attenuation_grid_db", "modes", "beta1_factors", "lambda_grid",
                "anchors", "allow_extrapolation"});
    read_field(s, "attenuation_grid_db", "$.sweep", c.attenuation_grid_db);
    read_field(s, "modes", "$.sweep", c.modes);
    read_field(s, "beta1_factors", "$.sweep", c.beta1_factors);
    read_field(s, "lambda_grid", "$.sweep", c.lambda_grid);
    read_field(s, "anchors", "$.sweep", c.anchors);
    read_field(s, "allow_extrapolation", "$.sweep", c.allow_extrapolation);
  }

  read_field(j, "out_dir", "$", c.out_dir);
  read_field(j, "parallelism", "$", c.parallelism);
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = task;
  if (preset) j["preset"] = *preset;

  nlohmann::ordered_json o;
  if (beta1) o["beta1"] = *beta1;
  if (bias_j0) o["bias_j0"] = *bias_j0;
  if (ridge_lambda) o["ridge_lambda"] = *ridge_lambda;
  if (n_nodes) o["n_nodes"] = *n_nodes;
  if (alpha) o["alpha"] = *alpha;
  if (attenuation_db) o["attenuation_db"] = *attenuation_db;
  o["nonlinearity"] = nonlinearity;
  o["mask_distribution"] = mask_distribution;
  j["overrides"] = o;

  if (calibrate_range) j["calibrate_range"] = *calibrate_range;

  nlohmann::ordered_json t;
  if (task == "narma10") {
    t["length"] = narma.length;
    t["input_seed"] = narma.input_seed;
    t["input_lo"] = narma.input_lo;
    t["input_hi"] = narma.input_hi;
    t["target_shift"] = narma.target_shift;
    t["printed_summand"] = narma.printed_summand;
  } else if (task == "mackey-glass") {
    t["length"] = mackey_glass.length;
    t["mg_beta"] = mackey_glass.mg_beta;
    t["mg_tau"] = mackey_glass.mg_tau;
    t["mg_exponent"] = mackey_glass.mg_exponent;
    t["mg_gamma"] = mackey_glass.mg_gamma;
    t["sample_dt"] = mackey_glass.sample_dt;
    t["substeps"] = mackey_glass.substeps;
    t["history_value"] = mackey_glass.history_value;
    t["transient_samples"] = mackey_glass.transient_samples;
    t["horizon"] = mackey_glass.horizon;
  }
  if (!t.empty()) j["task_params"] = t;

  j["split"] = {{"washout1", split.washout1},
                {"train_len", split.train_len},
                {"washout2", split.washout2},
                {"test_len", split.test_len}};
  nlohmann::ordered_json g;
  if (!beta2_grid.empty()) g["beta2"] = beta2_grid;
  if (!d_grid.empty()) g["d"] = d_grid;
  if (!g.empty()) j["grid"] = g;
  j["seeds"] = seeds;
  j["experiment_seed"] = experiment_seed;

  nlohmann::ordered_json p;
  p["kind"] = protocol.kind == ClassificationProtocol::Kind::Kfold ? "kfold"
                                                                   : "resplit";
  p["k"] = protocol.k;
  p["train_count"] = protocol.train_count;
  p["repeats"] = protocol.repeats;
  p["seed"] = protocol.seed;
  j["protocol"] = p;

  nlohmann::ordered_json s;
  s["attenuation_grid_db"] = attenuation_grid_db;
  s["modes"] = modes;
  s["beta1_factors"] = beta1_factors;
  s["lambda_grid"] = lambda_grid;
  if (!anchors.empty()) s["anchors"] = anchors;
  s["allow_extrapolation"] = allow_extrapolation;
  j["sweep"] = s;

  j["out_dir"] = out_dir;
  j["parallelism"] = parallelism;
  return j;
}

namespace {

Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "sine") return Nonlinearity::Sine;
  if (s == "tanh") return Nonlinearity::Tanh;
  if (s == "identity") return Nonlinearity::Identity;
  throw ValidationError("config: nonlinearity must be sine, tanh or identity");
}

MaskDistribution parse_mask_distribution(const std::string& s) {
  if (s == "uniform01") return MaskDistribution::Uniform01;
  if (s == "uniform_sym") return MaskDistribution::UniformSym;
  throw ValidationError(
      "config: mask_distribution must be uniform01 or uniform_sym");
}

}  // namespace

ResolvedExperiment resolve_experiment(const ExperimentConfig& config) {
  ResolvedExperiment r;
  r.config_echo = config.to_json();

  // Task data: builtin generators or a dataset file.
  std::optional<TaskName> preset_name;
  if (config.task == "narma10") {
    Narma10Params params = config.narma;
    params.split = config.split;
    if (params.split.total() != params.length) {
      params.split = default_split_for_length(params.length);
    }
    r.task.series = generate_narma10(params);
    r.task.label = "narma10";
    preset_name = TaskName::Narma10;
  } else if (config.task == "mackey-glass") {
    MackeyGlassParams params = config.mackey_glass;
    params.split = config.split;
    if (params.split.total() != params.length) {
      params.split = default_split_for_length(params.length);
    }
    r.task.series = generate_mackey_glass(params);
    r.task.label = "mackey-glass";
    preset_name = TaskName::MackeyGlass;
  } else {
    DatasetPayload payload = load_dataset(config.task);
    r.task.label = std::filesystem::path(config.task).stem().string();
    if (auto* series = std::get_if<SeriesTask>(&payload)) {
      r.task.series = std::move(*series);
    } else {
      r.task.utterances = std::move(std::get<UtteranceDataset>(payload));
      r.task.protocol = config.protocol;
    }
  }

  if (config.preset) {
    preset_name = parse_task_name(*config.preset);
    if (!preset_name) {
      throw ValidationError("config: unknown preset '" + *config.preset + "'");
    }
  }

  // Fixed parameters: preset (when known), then overrides, then calibration.
  ScanSettings& s = r.scan;
  if (preset_name) {
    const TaskPreset preset = task_preset(*preset_name);
    s.beta1 = preset.beta1;
    s.bias_j0 = preset.bias_j0;
    s.ridge_lambda = preset.ridge_lambda;
    s.n_nodes = preset.n_nodes;
    if (!config.alpha && !config.attenuation_db) {
      AttenuationMap map = AttenuationMap::defaults();
      if (!config.anchors.empty()) map.anchors = config.anchors;
      s.alpha = map_attenuation(preset.attenuation_db_options.front(), map,
                                config.allow_extrapolation)
                    .alpha;
    }
  }
  if (config.beta1) s.beta1 = *config.beta1;
  if (config.bias_j0) s.bias_j0 = *config.bias_j0;
  if (config.ridge_lambda) s.ridge_lambda = *config.ridge_lambda;
  if (config.n_nodes) s.n_nodes = *config.n_nodes;
  if (config.alpha) {
    s.alpha = *config.alpha;
  } else if (config.attenuation_db) {
    AttenuationMap map = AttenuationMap::defaults();
    if (!config.anchors.empty()) map.anchors = config.anchors;
    s.alpha = map_attenuation(*config.attenuation_db, map,
                              config.allow_extrapolation)
                  .alpha;
  }
  s.nonlinearity = parse_nonlinearity(config.nonlinearity);
  s.mask_distribution = parse_mask_distribution(config.mask_distribution);
  s.mask_seeds = config.seeds;
  s.experiment_seed = config.experiment_seed;
  s.parallelism = config.parallelism;

  if (config.calibrate_range) {
    const auto [lo, hi] = *config.calibrate_range;
    require(!config.seeds.empty(), "config: seeds must be non-empty");
    const MaskPair masks =
        generate_masks(s.n_nodes, static_cast<int>(r.task.channels()),
                       config.seeds.front(), s.mask_distribution);
    const InputSequence* input = nullptr;
    ConcatenatedStream stream;
    if (r.task.is_classification()) {
      stream = concatenate(*r.task.utterances);
      input = &stream.input;
    } else {
      input = &r.task.series->input;
    }
    const InputCalibration cal = calibrate_input_range(*input, masks, lo, hi);
    s.beta1 = cal.beta1;
    s.bias_j0 = cal.bias_j0;
  }

  r.beta2_grid =
      config.beta2_grid.empty() ? default_beta2_grid() : config.beta2_grid;
  r.d_grid = config.d_grid.empty() ? default_d_grid() : config.d_grid;

  r.sweep.base = s;
  r.sweep.beta2_grid = r.beta2_grid;
  r.sweep.d_grid = r.d_grid;
  r.sweep.beta1_factors = config.beta1_factors;
  r.sweep.lambda_grid = config.lambda_grid;
  if (!config.anchors.empty()) r.sweep.attenuation.anchors = config.anchors;
  r.sweep.allow_extrapolation = config.allow_extrapolation;
  r.attenuation_grid_db = config.attenuation_grid_db;
  for (const std::string& m : config.modes) {
    const auto mode = parse_sweep_mode(m);
    if (!mode) throw ValidationError("config: unknown sweep mode '" + m + "'");
    r.modes.push_back(*mode);
  }
  r.task.validate();
  return r;
}

}  // namespace rcdelay
