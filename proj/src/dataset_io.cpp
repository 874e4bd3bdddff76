#include "rcdelay/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace rcdelay {

static_assert(std::endian::native == std::endian::little,
              "dataset format is little-endian; big-endian hosts need swaps");

namespace {

constexpr char kMagic[4] = {'R', 'C', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ofstream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& out, T v) {
  write_bytes(out, &v, sizeof(T));
}

void read_bytes(std::ifstream& in, void* p, std::size_t n,
                const std::filesystem::path& path) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!in) {
    throw ValidationError("dataset: truncated or unreadable file: " +
                          path.string());
  }
}

template <typename T>
T read_pod(std::ifstream& in, const std::filesystem::path& path) {
  T v;
  read_bytes(in, &v, sizeof(T), path);
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("dataset: cannot open for writing: " + path.string());
  }
  return out;
}

}  // namespace

void save_dataset(const SeriesTask& task, const std::filesystem::path& path) {
  task.validate();
  std::ofstream out = open_out(path);
  write_bytes(out, kMagic, 4);
  write_pod<std::uint32_t>(out, kVersion);
  write_pod<std::uint8_t>(out, 0);
  const std::uint64_t k = static_cast<std::uint64_t>(task.input.timesteps());
  write_pod<std::uint64_t>(out, k);
  write_pod<std::uint64_t>(out, task.split.washout1);
  write_pod<std::uint64_t>(out, task.split.train_len);
  write_pod<std::uint64_t>(out, task.split.washout2);
  write_pod<std::uint64_t>(out, task.split.test_len);
  write_bytes(out, task.input.data.data(), k * sizeof(double));
  write_bytes(out, task.target.data(), k * sizeof(double));
  if (!out) throw ValidationError("dataset: write failed: " + path.string());
}

void save_dataset(const UtteranceDataset& dataset,
                  const std::filesystem::path& path) {
  dataset.validate();
  std::ofstream out = open_out(path);
  write_bytes(out, kMagic, 4);
  write_pod<std::uint32_t>(out, kVersion);
  write_pod<std::uint8_t>(out, 1);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.n_classes));
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.channels()));
  write_pod<std::uint64_t>(out, dataset.utterances.size());
  for (const auto& u : dataset.utterances) {
    write_pod<std::int64_t>(out, u.id);
    write_pod<std::int32_t>(out, u.label);
    write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(u.features.rows()));
    write_bytes(out, u.features.data(),
                static_cast<std::size_t>(u.features.size()) * sizeof(double));
  }
  if (!out) throw ValidationError("dataset: write failed: " + path.string());
}

DatasetPayload load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("dataset: cannot open: " + path.string());

  char magic[4];
  read_bytes(in, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError("dataset: bad magic (not an .rcds file): " +
                          path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw ValidationError("dataset: unsupported format version " +
                          std::to_string(version) + " in " + path.string());
  }
  const auto kind = read_pod<std::uint8_t>(in, path);

  if (kind == 0) {
    SeriesTask task;
    const auto k = read_pod<std::uint64_t>(in, path);
    require(k >= 1, "dataset: empty series");
    task.split.washout1 = static_cast<long>(read_pod<std::uint64_t>(in, path));
    task.split.train_len = static_cast<long>(read_pod<std::uint64_t>(in, path));
    task.split.washout2 = static_cast<long>(read_pod<std::uint64_t>(in, path));
    task.split.test_len = static_cast<long>(read_pod<std::uint64_t>(in, path));
    task.input.data.resize(static_cast<long>(k), 1);
    read_bytes(in, task.input.data.data(), k * sizeof(double), path);
    task.target.resize(static_cast<long>(k));
    read_bytes(in, task.target.data(), k * sizeof(double), path);
    task.validate();
    return task;
  }
  if (kind == 1) {
    UtteranceDataset ds;
    ds.n_classes = static_cast<int>(read_pod<std::uint32_t>(in, path));
    const auto channels = read_pod<std::uint32_t>(in, path);
    const auto count = read_pod<std::uint64_t>(in, path);
    require(channels >= 1 && count >= 1, "dataset: empty utterance file");
    ds.utterances.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      Utterance u;
      u.id = read_pod<std::int64_t>(in, path);
      u.label = static_cast<int>(read_pod<std::int32_t>(in, path));
      const auto t = read_pod<std::uint64_t>(in, path);
      require(t >= 1, "dataset: empty utterance record");
      u.features.resize(static_cast<long>(t), static_cast<long>(channels));
      read_bytes(in, u.features.data(),
                 static_cast<std::size_t>(t) * channels * sizeof(double), path);
      ds.utterances.push_back(std::move(u));
    }
    ds.validate();
    return ds;
  }
  throw ValidationError("dataset: unknown payload kind in " + path.string());
}

namespace {

void print_value(std::FILE* f, double v) { std::fprintf(f, "%.17g", v); }

}  // namespace

void export_dataset_text(const DatasetPayload& payload,
                         const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw ValidationError("dataset: cannot open for writing: " +
                                path.string());

  if (const auto* task = std::get_if<SeriesTask>(&payload)) {
    std::fprintf(f, "# series\tsplit=%ld/%ld/%ld/%ld\n", task->split.washout1,
                 task->split.train_len, task->split.washout2,
                 task->split.test_len);
    std::fprintf(f, "n\tinput\ttarget\n");
    for (long n = 0; n < task->input.timesteps(); ++n) {
      std::fprintf(f, "%ld\t", n);
      print_value(f, task->input.data(n, 0));
      std::fputc('\t', f);
      print_value(f, task->target[n]);
      std::fputc('\n', f);
    }
  } else {
    const auto& ds = std::get<UtteranceDataset>(payload);
    std::fprintf(f, "# utterances\tn_classes=%d\tchannels=%ld\n", ds.n_classes,
                 ds.channels());
    std::fprintf(f, "id\tlabel\tt\tfeatures...\n");
    for (const auto& u : ds.utterances) {
      for (long t = 0; t < u.features.rows(); ++t) {
        std::fprintf(f, "%lld\t%d\t%ld", static_cast<long long>(u.id), u.label,
                     t);
        for (long c = 0; c < u.features.cols(); ++c) {
          std::fputc('\t', f);
          print_value(f, u.features(t, c));
        }
        std::fputc('\n', f);
      }
    }
  }
  std::fclose(f);
}

}  // namespace rcdelay
