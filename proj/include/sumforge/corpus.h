// Copyright 2026 The sumforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Aligned corpora: JSONL I/O, direction swapping, weighted training
// schedules and length/extractivity statistics.

#ifndef SUMFORGE_CORPUS_H_
#define SUMFORGE_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumforge/io.h"
#include "sumforge/metrics.h"
#include "sumforge/rng.h"

namespace sumforge {

// One (transcription, report) example. JSONL form:
//   {"src": string, "tgt": string, "origin": string}
struct AlignedPair {
  std::string src;
  std::string tgt;
  std::string origin;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

std::string pair_to_json(const AlignedPair& pair);

// Throws Error(kMalformedLine) for invalid JSON or non-string fields,
// Error(kMissingField) for absent src/tgt and Error(kEmptyField) when
// src or tgt is blank. A missing origin reads as "".
AlignedPair pair_from_json(std::string_view line, std::size_t line_no);

// Streams pairs from a JSONL file; blank lines are skipped.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  std::optional<AlignedPair> next();
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

// Atomic JSONL writer (see AtomicWriter).
class JsonlWriter {
 public:
  explicit JsonlWriter(std::string path) : out_(std::move(path)) {}

  void write(const AlignedPair& pair);
  void commit() { out_.commit(); }

 private:
  AtomicWriter out_;
};

std::vector<AlignedPair> read_jsonl(const std::string& path);
void write_jsonl(std::span<const AlignedPair> pairs, const std::string& path);

// Report-only files carry a "tgt" field (src is not required).
class ReportReader {
 public:
  explicit ReportReader(const std::string& path);

  std::optional<std::string> next();

 private:
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> read_reports(const std::string& path);

// Number of non-blank lines.
std::size_t count_records(const std::string& path);

// src and tgt exchanged, origin suffixed "-rev".
AlignedPair swap_direction(const AlignedPair& pair);
std::vector<AlignedPair> swap_direction(std::span<const AlignedPair> pairs);

struct DatasetSpec {
  std::string name;
  std::string path;
  std::uint64_t weight = 1;
  std::size_t size = 0;  // number of examples
};

// Parses [[dataset]] tables (name, path, weight); relative paths resolve
// against the TOML file's directory and sizes are read from the files.
std::vector<DatasetSpec> load_dataset_specs(const std::string& toml_path);

// Inverse of load_dataset_specs (paths written as given, plus size).
std::string dataset_specs_toml(std::span<const DatasetSpec> specs);

struct ManifestEntry {
  std::size_t dataset = 0;  // index into the dataset list
  std::size_t example = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Infinite weighted schedule. A cycle holds exactly weight(d) entries of
// every dataset d, spread by smooth weighted round robin (each step picks
// the dataset with the largest accumulated quota). Within a dataset,
// examples follow a seeded permutation that is redrawn each time the
// dataset is exhausted, so visit counts of any two examples never differ
// by more than one.
class ManifestGenerator {
 public:
  // Throws Error(kEmptyDataset) for a dataset of size 0 and
  // Error(kInvalidArgument) for weight 0 or duplicate names.
  ManifestGenerator(std::vector<DatasetSpec> datasets, std::uint64_t seed);

  ManifestEntry next();

  std::uint64_t cycle_length() const noexcept { return cycle_length_; }
  const std::vector<DatasetSpec>& datasets() const noexcept { return datasets_; }

 private:
  struct Cursor {
    std::vector<std::size_t> order;
    std::size_t position = 0;
    std::uint64_t epoch = 0;
    std::int64_t quota = 0;
  };
  void reshuffle(std::size_t d);

  std::vector<DatasetSpec> datasets_;
  std::uint64_t seed_;
  std::uint64_t cycle_length_ = 0;
  std::vector<Cursor> cursors_;
};

struct TrainingManifest {
  std::vector<std::string> datasets;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> entries;
};

TrainingManifest weighted_interleave(std::span<const DatasetSpec> datasets,
                                     std::uint64_t seed, std::uint64_t cycles);

// Cycles needed for every dataset to be visited at least once:
// max over d of ceil(size(d) / weight(d)).
std::uint64_t cycles_for_one_pass(std::span<const DatasetSpec> datasets);

// Visits per example of each dataset after `cycles` cycles.
std::vector<double> upsample_rates(std::span<const DatasetSpec> datasets,
                                   std::uint64_t cycles);

// "#sumforge-manifest v1 seed=S" header, a "#datasets<TAB>name..." line,
// then "name<TAB>index" lines.
// Streams `cycles` cycles without materializing them.
void write_manifest(std::span<const DatasetSpec> datasets, std::uint64_t seed,
                    std::uint64_t cycles, std::ostream& out);
void write_manifest_file(std::span<const DatasetSpec> datasets,
                         std::uint64_t seed, std::uint64_t cycles,
                         const std::string& path);
TrainingManifest read_manifest(std::istream& in);

inline constexpr std::size_t kDefaultExtractivitySample = 10000;

struct CorpusStats {
  std::size_t n_pairs = 0;
  double src_mean = 0, tgt_mean = 0;
  std::size_t src_d1 = 0, src_d9 = 0;
  std::size_t tgt_d1 = 0, tgt_d9 = 0;
  double extractivity = 0;  // mean copy% of tgt against src
  std::size_t extractivity_sample = 0;
};

// Nearest-rank percentile for tenths (decile 1..9) of a sorted list.
std::size_t nearest_rank_decile(std::span<const std::size_t> sorted,
                                int decile);

// Single pass over a stream of pairs. Lengths are token counts from
// tokenize(); extractivity uses a seeded reservoir sample of `sample_cap`
// pairs (all pairs when fewer).
class StatsAccumulator {
 public:
  explicit StatsAccumulator(
      std::optional<std::size_t> sample_cap = kDefaultExtractivitySample,
      std::uint64_t seed = 0, CopyMetric metric = CopyMetric::kF1);

  void add(const AlignedPair& pair);

  // Throws Error(kEmptyCorpus) when nothing was added.
  CorpusStats finish(std::size_t jobs = 1) const;

 private:
  std::optional<std::size_t> cap_;
  CounterRng rng_;
  CopyMetric metric_;
  std::vector<std::size_t> src_lengths_;
  std::vector<std::size_t> tgt_lengths_;
  std::vector<AlignedPair> sample_;
  std::size_t seen_ = 0;
};

CorpusStats corpus_stats(
    std::span<const AlignedPair> pairs,
    std::optional<std::size_t> sample_cap = kDefaultExtractivitySample,
    std::uint64_t seed = 0, std::size_t jobs = 1,
    CopyMetric metric = CopyMetric::kF1);

CorpusStats corpus_stats_file(
    const std::string& path,
    std::optional<std::size_t> sample_cap = kDefaultExtractivitySample,
    std::uint64_t seed = 0, std::size_t jobs = 1,
    CopyMetric metric = CopyMetric::kF1);

std::string stats_json(const CorpusStats& stats);

}  // namespace sumforge

#endif  // SUMFORGE_CORPUS_H_
