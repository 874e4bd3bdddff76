#pragma once

#include <cstdint>

#include "rcdelay/common.hpp"
#include "rcdelay/reservoir.hpp"

namespace rcdelay {

/// Uniform01 = uniform on [0,1] (two-mask scheme); UniformSym = uniform on
/// [-1,1] (single-mask legacy convention).
enum class MaskDistribution { Uniform01, UniformSym };

/// Fixed input masks, N x C each (C = input channels).
struct MaskPair {
  Eigen::MatrixXd m1;
  Eigen::MatrixXd m2;
  std::uint64_t seed = 0;
  MaskDistribution distribution = MaskDistribution::Uniform01;

  long n_nodes() const { return m1.rows(); }
  long channels() const { return m1.cols(); }
};

/// J(n) = beta1 * M1 u(n) + beta2 * M2 u(n-d) + J0, with u(n-d) = 0 for n < d.
struct DelayedInputSpec {
  double beta1 = 1.0;
  double beta2 = 0.0;
  long delay_d = 0;
  double bias_j0 = 0.0;
  MaskPair masks;

  void validate() const;
};

/// Multichannel input, one timestep per row (K x C).
struct InputSequence {
  RowMatrixXd data;

  long timesteps() const { return data.rows(); }
  long channels() const { return data.cols(); }
  void validate() const;
};

/// Deterministic mask pair; m1 and m2 come from disjoint PRNG substreams of
/// `seed`, so regenerating either role alone stays well-defined.
MaskPair generate_masks(int n_nodes, int channels, std::uint64_t seed,
                        MaskDistribution distribution);

DriveMatrix build_drive(const InputSequence& input,
                        const DelayedInputSpec& spec);

struct InputCalibration {
  double beta1 = 1.0;
  double bias_j0 = 0.0;
};

/// Finds beta1 > 0 and J0 such that, with beta2 = 0, the drive built from
/// `input` spans exactly [target_lo, target_hi] (affine map of the empirical
/// extrema of M1 u(n)).
InputCalibration calibrate_input_range(const InputSequence& input,
                                       const MaskPair& masks, double target_lo,
                                       double target_hi);

}  // namespace rcdelay
