#pragma once

#include <cstdint>
#include <vector>

#include "rcdelay/common.hpp"
#include "rcdelay/masking.hpp"

namespace rcdelay {

/// One labeled multichannel sequence (T x C feature matrix).
struct Utterance {
  std::int64_t id = 0;
  int label = 0;
  RowMatrixXd features;
};

struct UtteranceDataset {
  std::vector<Utterance> utterances;
  int n_classes = 0;

  void validate() const;
  long total_timesteps() const;
  long channels() const;
};

/// Utterances joined end to end, in dataset order. States are not reset at
/// utterance boundaries, so a delayed input branch crosses them.
struct ConcatenatedStream {
  InputSequence input;
  std::vector<long> offsets;  // size count+1; utterance i spans [offsets[i], offsets[i+1])
};

ConcatenatedStream concatenate(const UtteranceDataset& dataset);

}  // namespace rcdelay
