#include "rcdelay/utterance.hpp"

namespace rcdelay {

void UtteranceDataset::validate() const {
  require(n_classes >= 1, "utterances: n_classes must be >= 1");
  require(!utterances.empty(), "utterances: dataset is empty");
  const long c = utterances.front().features.cols();
  for (const auto& u : utterances) {
    require(u.label >= 0 && u.label < n_classes,
            "utterances: label out of range [0, n_classes)");
    require(u.features.rows() >= 1, "utterances: empty feature sequence");
    require(u.features.cols() == c,
            "utterances: inconsistent channel counts across utterances");
    require(u.features.allFinite(),
            "utterances: features contain non-finite entries");
  }
}

long UtteranceDataset::total_timesteps() const {
  long total = 0;
  for (const auto& u : utterances) total += u.features.rows();
  return total;
}

long UtteranceDataset::channels() const {
  return utterances.empty() ? 0 : utterances.front().features.cols();
}

ConcatenatedStream concatenate(const UtteranceDataset& dataset) {
  dataset.validate();
  ConcatenatedStream stream;
  stream.offsets.reserve(dataset.utterances.size() + 1);
  stream.offsets.push_back(0);

  const long total = dataset.total_timesteps();
  stream.input.data.resize(total, dataset.channels());
  long row = 0;
  for (const auto& u : dataset.utterances) {
    stream.input.data.middleRows(row, u.features.rows()) = u.features;
    row += u.features.rows();
    stream.offsets.push_back(row);
  }
  return stream;
}

}  // namespace rcdelay
