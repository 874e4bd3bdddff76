#include "rcdelay/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rcdelay/rng.hpp"

namespace rcdelay {

void SplitSpec::validate() const {
  require(washout1 >= 0 && train_len >= 0 && washout2 >= 0 && test_len >= 0,
          "split: lengths must be non-negative");
  require(train_len >= 1 && test_len >= 1,
          "split: train_len and test_len must be >= 1");
}

void SeriesTask::validate() const {
  input.validate();
  require(input.channels() == 1, "series: input must have one channel");
  require(input.timesteps() == target.size(),
          "series: input and target lengths differ");
}

SplitRanges apply_split(const SeriesTask& task) {
  task.validate();
  task.split.validate();
  require(task.split.total() == task.input.timesteps(),
          "split: washout1+train_len+washout2+test_len must equal the series "
          "length");
  SplitRanges r;
  r.train.begin = task.split.washout1;
  r.train.end = r.train.begin + task.split.train_len;
  r.test.begin = r.train.end + task.split.washout2;
  r.test.end = r.test.begin + task.split.test_len;
  return r;
}

SplitSpec default_split_for_length(long length) {
  SplitSpec split;
  if (length == split.total()) return split;
  require(length >= 8, "split: series too short to partition");
  const long washout = std::max<long>(1, length / 42);
  split.washout1 = washout;
  split.washout2 = washout;
  split.train_len = (length - 2 * washout + 1) / 2;
  split.test_len = length - 2 * washout - split.train_len;
  return split;
}

SeriesTask generate_narma10(const Narma10Params& params) {
  require(params.length > 10, "narma10: length must exceed the order (10)");
  require(params.input_lo <= params.input_hi,
          "narma10: input_lo must be <= input_hi");
  require(params.target_shift == 0 || params.target_shift == 1,
          "narma10: target_shift must be 0 or 1");
  params.split.validate();
  require(params.split.total() == params.length,
          "narma10: split lengths must sum to the series length");

  const long k = params.length;
  const int shift = params.target_shift;

  Rng rng(params.input_seed);
  Eigen::VectorXd u(k);
  for (long n = 0; n < k; ++n) {
    u[n] = rng.uniform(params.input_lo, params.input_hi);
  }

  // q(n) = 0 and u(n) = 0 for n < 0.
  std::vector<double> q(static_cast<std::size_t>(k + shift), 0.0);
  for (long n = 0; n + 1 < k + shift; ++n) {
    double s = 0.0;
    if (params.printed_summand) {
      s = 10.0 * (n >= 1 ? q[n - 1] : 0.0);
    } else {
      for (int i = 0; i <= 9; ++i) s += (n - i >= 0) ? q[n - i] : 0.0;
    }
    const double un9 = n >= 9 ? u[n - 9] : 0.0;
    q[n + 1] = 0.3 * q[n] + 0.05 * q[n] * s + 1.5 * un9 * u[n] + 0.1;
    if (!(std::abs(q[n + 1]) <= 10.0)) {
      throw NumericalError("narma10: recursion diverged (|q| > 10) for seed " +
                           std::to_string(params.input_seed));
    }
  }

  SeriesTask task;
  task.input.data.resize(k, 1);
  task.input.data.col(0) = u;
  task.target.resize(k);
  for (long n = 0; n < k; ++n) task.target[n] = q[n + shift];
  task.split = params.split;
  task.validate();
  return task;
}

namespace {

struct MgRates {
  double beta, exponent, gamma;
  double operator()(double x, double xd) const {
    return beta * xd / (1.0 + std::pow(xd, exponent)) - gamma * x;
  }
};

void validate_mg(const MackeyGlassParams& p) {
  require(p.mg_beta > 0 && p.mg_tau > 0 && p.mg_exponent > 0 && p.mg_gamma > 0,
          "mackey-glass: all rate parameters must be positive");
  require(p.sample_dt > 0, "mackey-glass: sample_dt must be positive");
  require(p.substeps >= 1, "mackey-glass: substeps must be >= 1");
  require(p.horizon >= 1, "mackey-glass: horizon must be >= 1");
  require(p.transient_samples >= 0,
          "mackey-glass: transient_samples must be >= 0");
  const double h = p.sample_dt / p.substeps;
  require(p.mg_tau >= h,
          "mackey-glass: delay must be at least one internal step");
}

}  // namespace

Eigen::VectorXd mackey_glass_samples(const MackeyGlassParams& params,
                                     long n_samples) {
  validate_mg(params);
  require(n_samples >= 1, "mackey-glass: n_samples must be >= 1");

  const double h = params.sample_dt / params.substeps;
  const double delay_fine = params.mg_tau / h;  // delay in fine-grid units
  const long n_fine = (n_samples - 1) * params.substeps;
  const MgRates f{params.mg_beta, params.mg_exponent, params.mg_gamma};
  const double x0 = params.history_value;

  // Fine-grid values and derivatives; derivatives feed the Hermite
  // interpolation of the delayed term.
  std::vector<double> x(static_cast<std::size_t>(n_fine) + 1);
  std::vector<double> fx(static_cast<std::size_t>(n_fine) + 1);
  x[0] = x0;
  fx[0] = f(x0, x0);

  // Delayed value at fine index `idx` (constant history for idx <= 0).
  auto delayed = [&](double idx) -> double {
    if (idx <= 0.0) return x0;
    const long i = static_cast<long>(idx);
    const double th = idx - static_cast<double>(i);
    if (th == 0.0) return x[i];
    const double th2 = th * th, th3 = th2 * th;
    return (2 * th3 - 3 * th2 + 1) * x[i] + (th3 - 2 * th2 + th) * h * fx[i] +
           (-2 * th3 + 3 * th2) * x[i + 1] + (th3 - th2) * h * fx[i + 1];
  };

  for (long j = 0; j < n_fine; ++j) {
    const double xd1 = delayed(j - delay_fine);
    const double xd2 = delayed(j + 0.5 - delay_fine);
    const double xd3 = delayed(j + 1.0 - delay_fine);
    const double k1 = f(x[j], xd1);
    const double k2 = f(x[j] + 0.5 * h * k1, xd2);
    const double k3 = f(x[j] + 0.5 * h * k2, xd2);
    const double k4 = f(x[j] + h * k3, xd3);
    x[j + 1] = x[j] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    fx[j + 1] = f(x[j + 1], xd3);  // xd3 is the delayed value at t_{j+1}
    if (!std::isfinite(x[j + 1])) {
      throw NumericalError("mackey-glass: integration produced a non-finite "
                           "state at t=" +
                           std::to_string((j + 1) * h));
    }
  }

  Eigen::VectorXd samples(n_samples);
  for (long n = 0; n < n_samples; ++n) samples[n] = x[n * params.substeps];
  return samples;
}

SeriesTask generate_mackey_glass(const MackeyGlassParams& params) {
  validate_mg(params);
  require(params.length >= 2, "mackey-glass: length must be >= 2");
  params.split.validate();
  require(params.split.total() == params.length,
          "mackey-glass: split lengths must sum to the series length");

  const long total = params.transient_samples + params.length + params.horizon;
  const Eigen::VectorXd samples = mackey_glass_samples(params, total);

  SeriesTask task;
  task.input.data.resize(params.length, 1);
  task.target.resize(params.length);
  for (long n = 0; n < params.length; ++n) {
    task.input.data(n, 0) = samples[params.transient_samples + n];
    task.target[n] = samples[params.transient_samples + n + params.horizon];
  }
  task.split = params.split;
  task.validate();
  return task;
}

UtteranceDataset generate_separable_utterances(
    const SyntheticUtteranceParams& params) {
  require(params.n_classes >= 2, "synthetic: n_classes must be >= 2");
  require(params.count >= params.n_classes,
          "synthetic: need at least one utterance per class");
  require(params.min_len >= 1 && params.max_len >= params.min_len,
          "synthetic: invalid length range");

  const double two_pi = 6.283185307179586;
  Rng rng(mix_seed(params.seed, 0xA11CE));
  UtteranceDataset ds;
  ds.n_classes = params.n_classes;
  ds.utterances.reserve(params.count);
  for (int i = 0; i < params.count; ++i) {
    Utterance u;
    u.id = i;
    u.label = i % params.n_classes;
    const long t_len =
        params.min_len +
        static_cast<long>(rng.below(params.max_len - params.min_len + 1));
    const double phase = rng.uniform(0.0, two_pi);
    u.features.resize(t_len, params.n_classes);
    for (long t = 0; t < t_len; ++t) {
      for (int c = 0; c < params.n_classes; ++c) {
        u.features(t, c) = 0.01 * rng.uniform01();
      }
      u.features(t, u.label) =
          0.09 + 0.03 * std::sin(two_pi * t / 8.0 + phase);
    }
    ds.utterances.push_back(std::move(u));
  }
  ds.validate();
  return ds;
}

UtteranceDataset generate_temporal_context_utterances(
    const TemporalContextParams& params) {
  require(params.context_lag >= 1, "synthetic: context_lag must be >= 1");
  require(params.length > 2 * params.context_lag,
          "synthetic: utterances must be longer than twice the lag");
  require(params.count >= 3, "synthetic: need at least one utterance per class");
  require(params.level_lo < params.level_mid &&
              params.level_mid < params.level_hi,
          "synthetic: levels must be strictly increasing");

  const int d = params.context_lag;
  Rng rng(mix_seed(params.seed, 0xC0DE));
  UtteranceDataset ds;
  ds.n_classes = 3;
  ds.utterances.reserve(params.count);
  for (int i = 0; i < params.count; ++i) {
    Utterance u;
    u.id = i;
    u.label = i % 3;
    u.features.resize(params.length, 1);
    if (u.label == 0) {
      // independent levels; mid appears only in this class
      const double levels[3] = {params.level_lo, params.level_mid,
                                params.level_hi};
      for (long t = 0; t < params.length; ++t) {
        u.features(t, 0) = levels[rng.below(3)];
      }
    } else {
      // binary pattern of period d; label 2 flips it every period
      std::vector<bool> hi(d);
      for (int j = 0; j < d; ++j) hi[j] = rng.below(2) == 1;
      for (long t = 0; t < params.length; ++t) {
        bool level = hi[t % d];
        if (u.label == 2 && (t / d) % 2 == 1) level = !level;
        u.features(t, 0) = level ? params.level_hi : params.level_lo;
      }
    }
    for (long t = 0; t < params.length; ++t) {
      u.features(t, 0) += rng.uniform(-params.jitter, params.jitter);
    }
    ds.utterances.push_back(std::move(u));
  }
  ds.validate();
  return ds;
}

}  // namespace rcdelay
