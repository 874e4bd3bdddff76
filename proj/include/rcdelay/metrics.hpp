#pragma once

#include <span>

#include "rcdelay/common.hpp"

namespace rcdelay {

struct Nmse {
  double value = 0.0;
};

/// Mean squared error divided by the population variance of the target
/// (divisor = count). Errors on constant targets.
Nmse nmse(Eigen::Ref<const Eigen::VectorXd> predicted,
          Eigen::Ref<const Eigen::VectorXd> target);

struct ErrorRate {
  double value = 0.0;
  long n_correct = 0;
  long n_total = 0;
};

ErrorRate error_rate(std::span<const int> predictions,
                     std::span<const int> labels);

}  // namespace rcdelay
