#include "rcdelay/metrics.hpp"

namespace rcdelay {

Nmse nmse(Eigen::Ref<const Eigen::VectorXd> predicted,
          Eigen::Ref<const Eigen::VectorXd> target) {
  require(predicted.size() == target.size(),
          "nmse: predicted and target lengths differ");
  require(target.size() >= 2, "nmse: need at least two samples");

  const double mean = target.mean();
  const double var = (target.array() - mean).square().mean();
  if (!(var > 0.0)) {
    throw ValidationError("nmse: target is constant (undefined variance)");
  }
  const double mse = (predicted - target).array().square().mean();
  return Nmse{mse / var};
}

ErrorRate error_rate(std::span<const int> predictions,
                     std::span<const int> labels) {
  require(predictions.size() == labels.size(),
          "error_rate: prediction and label counts differ");
  require(!labels.empty(), "error_rate: empty inputs");

  long correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++correct;
  }
  const long total = static_cast<long>(labels.size());
  return ErrorRate{1.0 - static_cast<double>(correct) / total, correct, total};
}

}  // namespace rcdelay
