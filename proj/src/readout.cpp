#include "rcdelay/readout.hpp"

#include <cmath>

#include "rcdelay/metrics.hpp"
#include "rcdelay/rng.hpp"

namespace rcdelay {

namespace {

std::vector<long> utterance_offsets(const UtteranceDataset& ds) {
  std::vector<long> offsets;
  offsets.reserve(ds.utterances.size() + 1);
  offsets.push_back(0);
  for (const auto& u : ds.utterances) {
    offsets.push_back(offsets.back() + u.features.rows());
  }
  return offsets;
}

EvalStats finish_stats(std::vector<double> errors) {
  EvalStats stats;
  stats.error_rates = std::move(errors);
  double sum = 0.0;
  for (double e : stats.error_rates) sum += e;
  stats.mean = sum / stats.error_rates.size();
  double ss = 0.0;
  for (double e : stats.error_rates) ss += (e - stats.mean) * (e - stats.mean);
  stats.stddev = std::sqrt(ss / stats.error_rates.size());
  return stats;
}

// Error rate of winner-takes-all predictions over the given utterances.
double classify_utterances(const UtteranceDataset& ds,
                           const std::vector<long>& offsets,
                           const std::vector<long>& which,
                           Eigen::Ref<const RowMatrixXd> states,
                           const TrainedReadout& readout) {
  std::vector<int> preds, labels;
  preds.reserve(which.size());
  labels.reserve(which.size());
  for (long i : which) {
    const long off = offsets[i];
    const long len = offsets[i + 1] - off;
    const RowMatrixXd scores = predict(readout, states.middleRows(off, len));
    preds.push_back(winner_takes_all(scores));
    labels.push_back(ds.utterances[i].label);
  }
  return error_rate(preds, labels).value;
}

}  // namespace

TrainedReadout train_ridge(Eigen::Ref<const RowMatrixXd> states,
                           Eigen::Ref<const RowMatrixXd> targets,
                           double ridge_lambda, bool with_bias) {
  require(states.rows() == targets.rows(),
          "ridge: states and targets row counts differ");
  require(states.rows() >= 1 && states.cols() >= 1,
          "ridge: empty state matrix");
  require(targets.cols() >= 1, "ridge: empty target matrix");
  require(ridge_lambda >= 0.0, "ridge: lambda must be >= 0");

  Eigen::MatrixXd gram;
  Eigen::MatrixXd rhs;
  if (with_bias) {
    RowMatrixXd augmented(states.rows(), states.cols() + 1);
    augmented.leftCols(states.cols()) = states;
    augmented.col(states.cols()).setOnes();
    gram = augmented.transpose() * augmented;
    rhs = augmented.transpose() * targets;
  } else {
    gram = states.transpose() * states;
    rhs = states.transpose() * targets;
  }
  gram.diagonal().array() += ridge_lambda;

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  const Eigen::MatrixXd solution = ldlt.solve(rhs);  // (N [+1]) x C_out

  const bool finite = solution.allFinite();
  bool ok = finite && ldlt.info() == Eigen::Success;
  if (ok && ridge_lambda == 0.0) {
    // LDLT degrades silently on (near-)singular normal equations.
    const double residual = (gram * solution - rhs).norm();
    const double scale = gram.norm() * solution.norm() + rhs.norm();
    ok = residual <= 1e-8 * scale;
  }
  if (!ok) {
    throw NumericalError(
        "ridge: X^T X is singular or severely ill-conditioned with lambda=0; "
        "set ridge_lambda > 0");
  }

  TrainedReadout readout;
  readout.weights = solution.transpose();
  readout.ridge_lambda = ridge_lambda;
  readout.has_bias = with_bias;
  return readout;
}

RowMatrixXd predict(const TrainedReadout& readout,
                    Eigen::Ref<const RowMatrixXd> states) {
  const long n = readout.weights.cols() - (readout.has_bias ? 1 : 0);
  require(states.cols() == n,
          "predict: state width does not match readout weights");
  RowMatrixXd out =
      states * readout.weights.leftCols(n).transpose();  // T x C_out
  if (readout.has_bias) {
    out.rowwise() += readout.weights.col(n).transpose();
  }
  return out;
}

RowMatrixXd make_classification_targets(const UtteranceDataset& dataset,
                                        long concatenated_length) {
  dataset.validate();
  require(dataset.total_timesteps() == concatenated_length,
          "targets: concatenated length does not match dataset timesteps");

  RowMatrixXd targets(concatenated_length, dataset.n_classes);
  targets.setConstant(-1.0);
  long row = 0;
  for (const auto& u : dataset.utterances) {
    for (long t = 0; t < u.features.rows(); ++t, ++row) {
      targets(row, u.label) = 1.0;
    }
  }
  return targets;
}

int winner_takes_all(Eigen::Ref<const RowMatrixXd> scores) {
  require(scores.rows() >= 1 && scores.cols() >= 1,
          "winner_takes_all: empty score matrix");

  std::vector<long> votes(scores.cols(), 0);
  for (long t = 0; t < scores.rows(); ++t) {
    long best = 0;
    for (long c = 1; c < scores.cols(); ++c) {
      if (scores(t, c) > scores(t, best)) best = c;  // ties keep lowest index
    }
    ++votes[best];
  }
  long winner = 0;
  for (long c = 1; c < scores.cols(); ++c) {
    if (votes[c] > votes[winner]) winner = c;
  }
  return static_cast<int>(winner);
}

ReadoutTrainer ridge_trainer(double ridge_lambda) {
  return [ridge_lambda](Eigen::Ref<const RowMatrixXd> x,
                        Eigen::Ref<const RowMatrixXd> y) {
    return train_ridge(x, y, ridge_lambda);
  };
}

EvalStats kfold_evaluate(const UtteranceDataset& dataset, int k,
                         Eigen::Ref<const RowMatrixXd> states,
                         const ReadoutTrainer& train) {
  dataset.validate();
  const long count = static_cast<long>(dataset.utterances.size());
  require(k >= 2, "kfold: k must be >= 2");
  require(k <= count, "kfold: k exceeds the utterance count");

  const std::vector<long> offsets = utterance_offsets(dataset);
  const long total = offsets.back();
  require(states.rows() == total,
          "kfold: state rows do not match concatenated dataset timesteps");
  const RowMatrixXd targets = make_classification_targets(dataset, total);

  std::vector<double> errors;
  errors.reserve(k);
  for (int f = 0; f < k; ++f) {
    const long u_begin = f * count / k;
    const long u_end = (f + 1) * count / k;
    const long r_begin = offsets[u_begin];
    const long r_end = offsets[u_end];

    // Folds are contiguous, so the training rows form two blocks.
    const long train_rows = total - (r_end - r_begin);
    RowMatrixXd x(train_rows, states.cols());
    RowMatrixXd y(train_rows, targets.cols());
    x.topRows(r_begin) = states.topRows(r_begin);
    y.topRows(r_begin) = targets.topRows(r_begin);
    x.bottomRows(total - r_end) = states.bottomRows(total - r_end);
    y.bottomRows(total - r_end) = targets.bottomRows(total - r_end);

    const TrainedReadout readout = train(x, y);
    std::vector<long> held_out;
    for (long i = u_begin; i < u_end; ++i) held_out.push_back(i);
    errors.push_back(
        classify_utterances(dataset, offsets, held_out, states, readout));
  }
  return finish_stats(std::move(errors));
}

EvalStats random_resplit_evaluate(const UtteranceDataset& dataset,
                                  int train_count, int repeats,
                                  std::uint64_t seed,
                                  Eigen::Ref<const RowMatrixXd> states,
                                  const ReadoutTrainer& train) {
  dataset.validate();
  const long count = static_cast<long>(dataset.utterances.size());
  require(train_count >= 1, "resplit: train_count must be >= 1");
  require(train_count < count,
          "resplit: train_count must be below the utterance count");
  require(repeats >= 1, "resplit: repeats must be >= 1");

  const std::vector<long> offsets = utterance_offsets(dataset);
  const long total = offsets.back();
  require(states.rows() == total,
          "resplit: state rows do not match concatenated dataset timesteps");
  const RowMatrixXd targets = make_classification_targets(dataset, total);

  std::vector<double> errors;
  errors.reserve(repeats);
  for (int r = 0; r < repeats; ++r) {
    std::vector<long> order(count);
    for (long i = 0; i < count; ++i) order[i] = i;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r), 0x5EED));
    deterministic_shuffle(order, rng);

    std::vector<long> train_idx(order.begin(), order.begin() + train_count);
    std::vector<long> test_idx(order.begin() + train_count, order.end());

    long train_rows = 0;
    for (long i : train_idx) train_rows += offsets[i + 1] - offsets[i];
    RowMatrixXd x(train_rows, states.cols());
    RowMatrixXd y(train_rows, targets.cols());
    long row = 0;
    for (long i : train_idx) {
      const long off = offsets[i];
      const long len = offsets[i + 1] - off;
      x.middleRows(row, len) = states.middleRows(off, len);
      y.middleRows(row, len) = targets.middleRows(off, len);
      row += len;
    }

    const TrainedReadout readout = train(x, y);
    errors.push_back(
        classify_utterances(dataset, offsets, test_idx, states, readout));
  }
  return finish_stats(std::move(errors));
}

}  // namespace rcdelay
