#include "rcdelay/masking.hpp"

#include <cmath>

#include "rcdelay/rng.hpp"

namespace rcdelay {

void DelayedInputSpec::validate() const {
  require(beta1 >= 0.0, "masking: beta1 must be >= 0");
  require(beta2 >= 0.0, "masking: beta2 must be >= 0");
  require(delay_d >= 0, "masking: delay_d must be >= 0");
  require(masks.m1.rows() == masks.m2.rows() &&
              masks.m1.cols() == masks.m2.cols(),
          "masking: m1 and m2 must have identical shapes");
  require(masks.m1.rows() >= 1 && masks.m1.cols() >= 1,
          "masking: masks must be non-empty");
}

void InputSequence::validate() const {
  require(data.rows() >= 1 && data.cols() >= 1,
          "input: sequence must be non-empty");
  require(data.allFinite(), "input: sequence contains non-finite entries");
}

MaskPair generate_masks(int n_nodes, int channels, std::uint64_t seed,
                        MaskDistribution distribution) {
  require(n_nodes >= 1, "masking: n_nodes must be >= 1");
  require(channels >= 1, "masking: channels must be >= 1");

  const double lo = distribution == MaskDistribution::Uniform01 ? 0.0 : -1.0;
  const double hi = 1.0;

  MaskPair pair;
  pair.seed = seed;
  pair.distribution = distribution;
  pair.m1.resize(n_nodes, channels);
  pair.m2.resize(n_nodes, channels);

  Rng rng1(mix_seed(seed, 1));
  Rng rng2(mix_seed(seed, 2));
  for (int i = 0; i < n_nodes; ++i) {
    for (int c = 0; c < channels; ++c) pair.m1(i, c) = rng1.uniform(lo, hi);
  }
  for (int i = 0; i < n_nodes; ++i) {
    for (int c = 0; c < channels; ++c) pair.m2(i, c) = rng2.uniform(lo, hi);
  }
  return pair;
}

DriveMatrix build_drive(const InputSequence& input,
                        const DelayedInputSpec& spec) {
  spec.validate();
  input.validate();
  require(input.channels() == spec.masks.channels(),
          "masking: input channel count does not match masks");

  const long steps = input.timesteps();

  // Masked current branch for every step: rows of U * M1^T are M1 u(n).
  DriveMatrix drive = spec.beta1 * (input.data * spec.masks.m1.transpose());
  drive.array() += spec.bias_j0;

  // Delayed branch; u(n-d) is all-zeros for n < d, so rows [0, d) get none.
  if (spec.beta2 != 0.0 && spec.delay_d < steps) {
    const long d = spec.delay_d;
    DriveMatrix delayed =
        spec.beta2 * (input.data.topRows(steps - d) * spec.masks.m2.transpose());
    drive.bottomRows(steps - d) += delayed;
  }
  return drive;
}

InputCalibration calibrate_input_range(const InputSequence& input,
                                       const MaskPair& masks, double target_lo,
                                       double target_hi) {
  input.validate();
  require(target_lo < target_hi, "calibrate: target_lo must be < target_hi");
  require(input.channels() == masks.channels(),
          "calibrate: input channel count does not match masks");

  const Eigen::MatrixXd masked = input.data * masks.m1.transpose();
  const double lo = masked.minCoeff();
  const double hi = masked.maxCoeff();
  if (!(hi - lo > 0.0)) {
    throw ValidationError(
        "calibrate: masked input has zero spread (constant input?)");
  }

  InputCalibration cal;
  cal.beta1 = (target_hi - target_lo) / (hi - lo);
  cal.bias_j0 = target_lo - cal.beta1 * lo;
  return cal;
}

}  // namespace rcdelay
