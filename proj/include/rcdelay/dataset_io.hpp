#pragma once

#include <filesystem>
#include <variant>

#include "rcdelay/tasks.hpp"
#include "rcdelay/utterance.hpp"

namespace rcdelay {

/// On-disk dataset container (`.rcds`). Little-endian binary with 64-bit
/// float feature blocks so round trips are bit-exact:
///   magic "RCDS" | u32 version=1 | u8 kind (0 series, 1 utterances)
///   series:     u64 K | u64 washout1,train_len,washout2,test_len
///               | K f64 input | K f64 target
///   utterances: u32 n_classes | u32 channels | u64 count
///               | count x (i64 id | i32 label | u64 T | T*C f64 row-major)
using DatasetPayload = std::variant<SeriesTask, UtteranceDataset>;

void save_dataset(const SeriesTask& task, const std::filesystem::path& path);
void save_dataset(const UtteranceDataset& dataset,
                  const std::filesystem::path& path);

DatasetPayload load_dataset(const std::filesystem::path& path);

/// Tab-separated dump of a dataset for inspection.
void export_dataset_text(const DatasetPayload& payload,
                         const std::filesystem::path& path);

}  // namespace rcdelay
