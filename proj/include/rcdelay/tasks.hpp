#pragma once

#include <cstdint>

#include "rcdelay/common.hpp"
#include "rcdelay/masking.hpp"
#include "rcdelay/utterance.hpp"

namespace rcdelay {

/// Washout/train/washout/test partition of a series; the four lengths must
/// sum to the series length.
struct SplitSpec {
  long washout1 = 500;
  long train_len = 10000;
  long washout2 = 500;
  long test_len = 10000;

  long total() const { return washout1 + train_len + washout2 + test_len; }
  void validate() const;
};

/// Scalar time-series task: input (K x 1), per-timestep target, split.
struct SeriesTask {
  InputSequence input;
  Eigen::VectorXd target;
  SplitSpec split;

  void validate() const;
};

/// Half-open index ranges into the state-matrix rows / targets.
struct IndexRange {
  long begin = 0;
  long end = 0;
  long size() const { return end - begin; }
};

struct SplitRanges {
  IndexRange train;
  IndexRange test;
};

/// Train range [w1, w1+train), test range [w1+train+w2, end).
SplitRanges apply_split(const SeriesTask& task);

/// The 500/10000/500/10000 defaults when length is 21000; otherwise a
/// proportionally shaped split that sums to `length`.
SplitSpec default_split_for_length(long length);

struct Narma10Params {
  long length = 21000;
  std::uint64_t input_seed = 1;
  double input_lo = 0.0;
  double input_hi = 0.5;
  // target(n) = q(n + target_shift). Default 1: predict the next value.
  int target_shift = 1;
  // Sum the literal q(n-1) ten times instead of the ten lags q(n-i).
  bool printed_summand = false;
  SplitSpec split{};
};

/// q(n+1) = 0.3 q(n) + 0.05 q(n) (sum_{i=0..9} q(n-i))
///        + 1.5 u(n-9) u(n) + 0.1,  u i.i.d. uniform [input_lo, input_hi].
/// Aborts with the offending seed if |q| exceeds 10.
SeriesTask generate_narma10(const Narma10Params& params);

struct MackeyGlassParams {
  double mg_beta = 0.2;
  double mg_tau = 17.0;
  double mg_exponent = 10.0;
  double mg_gamma = 0.1;
  double sample_dt = 1.0;
  int substeps = 10;  // internal integrator steps per emitted sample
  double history_value = 1.2;
  long transient_samples = 1000;
  long length = 21000;
  long horizon = 10;  // forecast distance: target(n) = x((n + horizon) dt)
  SplitSpec split{};
};

/// dx/dt = mg_beta x(t-tau) / (1 + x(t-tau)^mg_exponent) - mg_gamma x(t),
/// integrated with fixed-step RK4 from constant history; the delayed term is
/// cubic-Hermite interpolated on the stored fine grid.
SeriesTask generate_mackey_glass(const MackeyGlassParams& params);

/// Raw Mackey-Glass samples (x(0), x(dt), ...), before transient removal.
/// Exposed for convergence checks.
Eigen::VectorXd mackey_glass_samples(const MackeyGlassParams& params,
                                     long n_samples);

// ---- synthetic utterance benchmarks (stand-ins for the audio corpora) ----

/// Classes occupy distinct channels: linearly separable in state space.
struct SyntheticUtteranceParams {
  int n_classes = 3;
  int count = 120;
  int min_len = 30;
  int max_len = 50;
  std::uint64_t seed = 7;
};

UtteranceDataset generate_separable_utterances(
    const SyntheticUtteranceParams& params);

/// Scalar streams whose class is determined jointly by the current and the
/// context_lag-lagged input level, so a delayed-input scan has its optimum at
/// d = context_lag by construction. Classes: 0 = i.i.d. levels (lo/mid/hi),
/// 1 = periodic with period context_lag, 2 = anti-periodic.
struct TemporalContextParams {
  int context_lag = 3;
  int count = 120;
  int length = 40;
  std::uint64_t seed = 7;
  double level_lo = 0.02;
  double level_mid = 0.07;
  double level_hi = 0.12;
  double jitter = 0.002;
};

UtteranceDataset generate_temporal_context_utterances(
    const TemporalContextParams& params);

}  // namespace rcdelay
