#pragma once

#include <cstdint>

#include "rcdelay/common.hpp"

namespace rcdelay {

enum class Nonlinearity { Sine, Tanh, Identity };

/// Initial reservoir state. Zeros is the default; SeededUniform draws both
/// state buffers uniformly from [-1, 1] and exists for echo-state testing.
struct InitialState {
  enum class Kind { Zeros, SeededUniform };
  Kind kind = Kind::Zeros;
  std::uint64_t seed = 0;

  static InitialState zeros() { return {}; }
  static InitialState seeded_uniform(std::uint64_t seed) {
    return {Kind::SeededUniform, seed};
  }
};

struct ReservoirParams {
  int n_nodes = 50;
  double feedback_alpha = 0.15;
  Nonlinearity nonlinearity = Nonlinearity::Sine;
  InitialState initial_state{};

  void validate() const;
  bool contractive() const { return feedback_alpha < 1.0; }
};

/// Ring state at step n. `previous` is kept because node 0 of step n+1 reads
/// node N-1 of step n-1, not of step n.
struct ReservoirState {
  Eigen::VectorXd current;
  Eigen::VectorXd previous;
  long step_index = 0;
};

/// Collected states, one timestep per row (N columns). `timestep_offset` is
/// the index of the first retained step within the driving sequence.
struct StateMatrix {
  RowMatrixXd data;
  long timestep_offset = 0;

  long rows() const { return data.rows(); }
  long cols() const { return data.cols(); }
};

// Per-timestep drive vectors stacked as rows (K x N).
using DriveMatrix = RowMatrixXd;

ReservoirState initial_reservoir_state(const ReservoirParams& params);

/// One ring update:
///   next[0] = f(alpha * previous[N-1] + drive[0])
///   next[i] = f(alpha * current[i-1] + drive[i]),  i = 1..N-1
ReservoirState step(const ReservoirState& state,
                    Eigen::Ref<const Eigen::VectorXd> drive,
                    const ReservoirParams& params);

/// Drives the reservoir over every row of `drive`, discards the first
/// `washout` states and stacks the rest as rows.
StateMatrix run(const DriveMatrix& drive, const ReservoirParams& params,
                long washout);

}  // namespace rcdelay
