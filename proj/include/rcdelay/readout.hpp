#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rcdelay/common.hpp"
#include "rcdelay/utterance.hpp"

namespace rcdelay {

/// Linear readout: weights is C_out x N (C_out = 1 for regression).
struct TrainedReadout {
  Eigen::MatrixXd weights;
  double ridge_lambda = 0.0;
  bool has_bias = false;  // weights gain one trailing bias column when set
};

/// Ridge regression, W = argmin |X W^T - y|^2 + lambda |W|^2, computed by a
/// symmetric factorization of (X^T X + lambda I) — never by explicit
/// inversion. lambda = 0 on a rank-deficient system raises NumericalError.
TrainedReadout train_ridge(Eigen::Ref<const RowMatrixXd> states,
                           Eigen::Ref<const RowMatrixXd> targets,
                           double ridge_lambda, bool with_bias = false);

RowMatrixXd predict(const TrainedReadout& readout,
                    Eigen::Ref<const RowMatrixXd> states);

/// One row per concatenated timestep: +1 in the utterance's label column,
/// -1 elsewhere. `concatenated_length` cross-checks the bookkeeping.
RowMatrixXd make_classification_targets(const UtteranceDataset& dataset,
                                        long concatenated_length);

/// Per-timestep argmax votes aggregated by majority over the utterance;
/// all ties break to the lowest class index.
int winner_takes_all(Eigen::Ref<const RowMatrixXd> scores);

using ReadoutTrainer = std::function<TrainedReadout(
    Eigen::Ref<const RowMatrixXd>, Eigen::Ref<const RowMatrixXd>)>;

ReadoutTrainer ridge_trainer(double ridge_lambda);

struct EvalStats {
  std::vector<double> error_rates;  // one per fold / repeat
  double mean = 0.0;
  double stddev = 0.0;  // population convention
};

/// k-fold cross-validation over utterances (contiguous near-equal folds in
/// dataset order). `states` are the reservoir states of the full concatenated
/// stream, computed once; rows must align with concatenate(dataset).
EvalStats kfold_evaluate(const UtteranceDataset& dataset, int k,
                         Eigen::Ref<const RowMatrixXd> states,
                         const ReadoutTrainer& train);

/// `repeats` seeded random train/test splits of the utterances.
EvalStats random_resplit_evaluate(const UtteranceDataset& dataset,
                                  int train_count, int repeats,
                                  std::uint64_t seed,
                                  Eigen::Ref<const RowMatrixXd> states,
                                  const ReadoutTrainer& train);

}  // namespace rcdelay
