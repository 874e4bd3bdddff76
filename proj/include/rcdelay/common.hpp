#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace rcdelay {

// Row-per-sample matrix: timesteps (or utterance frames) along rows.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Contract or configuration violation. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (divergence, singular system, non-finite state).
/// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace rcdelay
