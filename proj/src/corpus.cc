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

#include "sumforge/corpus.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sumforge/error.h"
#include "sumforge/parallel.h"
#include "sumforge/text.h"
#include "sumforge/tokenize.h"

namespace sumforge {
namespace {

using nlohmann::json;

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

json parse_object(std::string_view line, std::size_t line_no) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) {
    throw Error(ErrorCode::kMalformedLine,
                "line " + std::to_string(line_no) + ": not a JSON object");
  }
  return obj;
}

std::string string_field(const json& obj, const char* name,
                         std::size_t line_no, bool required) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    if (required) {
      throw Error(ErrorCode::kMissingField,
                  std::string(name) + " (line " + std::to_string(line_no) + ")");
    }
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(line_no) +
                                               ": field " + name +
                                               " is not a string");
  }
  return it->get<std::string>();
}

void require_text(const std::string& value, const char* name,
                  std::size_t line_no) {
  if (text::normalize_whitespace(value).empty()) {
    throw Error(ErrorCode::kEmptyField,
                std::string(name) + " (line " + std::to_string(line_no) + ")");
  }
}

}  // namespace

std::string pair_to_json(const AlignedPair& pair) {
  json obj = {{"src", pair.src}, {"tgt", pair.tgt}, {"origin", pair.origin}};
  return obj.dump(-1, ' ', /*ensure_ascii=*/false,
                  json::error_handler_t::strict);
}

AlignedPair pair_from_json(std::string_view line, std::size_t line_no) {
  const json obj = parse_object(line, line_no);
  AlignedPair pair;
  pair.src = string_field(obj, "src", line_no, true);
  pair.tgt = string_field(obj, "tgt", line_no, true);
  pair.origin = string_field(obj, "origin", line_no, false);
  require_text(pair.src, "src", line_no);
  require_text(pair.tgt, "tgt", line_no);
  return pair;
}

JsonlReader::JsonlReader(const std::string& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot read " + path);
}

std::optional<AlignedPair> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (is_blank(line)) continue;
    return pair_from_json(line, line_no_);
  }
  return std::nullopt;
}

void JsonlWriter::write(const AlignedPair& pair) {
  out_.stream() << pair_to_json(pair) << '\n';
}

std::vector<AlignedPair> read_jsonl(const std::string& path) {
  JsonlReader reader(path);
  std::vector<AlignedPair> pairs;
  while (auto pair = reader.next()) pairs.push_back(std::move(*pair));
  return pairs;
}

void write_jsonl(std::span<const AlignedPair> pairs, const std::string& path) {
  JsonlWriter writer(path);
  for (const AlignedPair& p : pairs) writer.write(p);
  writer.commit();
}

ReportReader::ReportReader(const std::string& path)
    : in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kIo, "cannot read " + path);
}

std::optional<std::string> ReportReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (is_blank(line)) continue;
    const json obj = parse_object(line, line_no_);
    std::string tgt = string_field(obj, "tgt", line_no_, true);
    require_text(tgt, "tgt", line_no_);
    return tgt;
  }
  return std::nullopt;
}

std::vector<std::string> read_reports(const std::string& path) {
  ReportReader reader(path);
  std::vector<std::string> reports;
  while (auto r = reader.next()) reports.push_back(std::move(*r));
  return reports;
}

std::size_t count_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!is_blank(line)) ++n;
  }
  return n;
}

AlignedPair swap_direction(const AlignedPair& pair) {
  return {pair.tgt, pair.src, pair.origin + "-rev"};
}

std::vector<AlignedPair> swap_direction(std::span<const AlignedPair> pairs) {
  std::vector<AlignedPair> out;
  out.reserve(pairs.size());
  for (const AlignedPair& p : pairs) out.push_back(swap_direction(p));
  return out;
}

ManifestGenerator::ManifestGenerator(std::vector<DatasetSpec> datasets,
                                     std::uint64_t seed)
    : datasets_(std::move(datasets)), seed_(seed) {
  if (datasets_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no datasets to interleave");
  }
  std::set<std::string> names;
  for (const DatasetSpec& d : datasets_) {
    if (d.size == 0) throw Error(ErrorCode::kEmptyDataset, d.name);
    if (d.weight == 0) {
      throw Error(ErrorCode::kInvalidArgument, "weight of " + d.name + " is 0");
    }
    if (!names.insert(d.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate dataset " + d.name);
    }
    cycle_length_ += d.weight;
  }
  cursors_.resize(datasets_.size());
  for (std::size_t d = 0; d < datasets_.size(); ++d) {
    cursors_[d].order.resize(datasets_[d].size);
    reshuffle(d);
  }
}

void ManifestGenerator::reshuffle(std::size_t d) {
  Cursor& c = cursors_[d];
  std::iota(c.order.begin(), c.order.end(), std::size_t{0});
  CounterRng rng =
      CounterRng(seed_, fnv1a64(datasets_[d].name)).split(c.epoch);
  shuffle(std::span<std::size_t>(c.order), rng);
  c.position = 0;
}

ManifestEntry ManifestGenerator::next() {
  // Smooth weighted round robin: quotas sum to zero after every full
  // cycle, so each cycle contains exactly weight(d) picks of dataset d.
  std::size_t pick = 0;
  for (std::size_t d = 0; d < cursors_.size(); ++d) {
    cursors_[d].quota += static_cast<std::int64_t>(datasets_[d].weight);
    if (cursors_[d].quota > cursors_[pick].quota) pick = d;
  }
  Cursor& c = cursors_[pick];
  c.quota -= static_cast<std::int64_t>(cycle_length_);
  const ManifestEntry entry{pick, c.order[c.position]};
  if (++c.position == c.order.size()) {
    ++c.epoch;
    reshuffle(pick);
  }
  return entry;
}

TrainingManifest weighted_interleave(std::span<const DatasetSpec> datasets,
                                     std::uint64_t seed, std::uint64_t cycles) {
  ManifestGenerator gen({datasets.begin(), datasets.end()}, seed);
  TrainingManifest manifest;
  manifest.seed = seed;
  for (const DatasetSpec& d : datasets) manifest.datasets.push_back(d.name);
  const std::uint64_t total = cycles * gen.cycle_length();
  manifest.entries.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) manifest.entries.push_back(gen.next());
  return manifest;
}

std::uint64_t cycles_for_one_pass(std::span<const DatasetSpec> datasets) {
  std::uint64_t cycles = 0;
  for (const DatasetSpec& d : datasets) {
    if (d.weight == 0) continue;
    cycles = std::max<std::uint64_t>(cycles, (d.size + d.weight - 1) / d.weight);
  }
  return cycles;
}

std::vector<double> upsample_rates(std::span<const DatasetSpec> datasets,
                                   std::uint64_t cycles) {
  std::vector<double> rates;
  for (const DatasetSpec& d : datasets) {
    rates.push_back(d.size == 0 ? 0.0
                                : static_cast<double>(cycles * d.weight) /
                                      static_cast<double>(d.size));
  }
  return rates;
}

void write_manifest(std::span<const DatasetSpec> datasets, std::uint64_t seed,
                    std::uint64_t cycles, std::ostream& out) {
  ManifestGenerator gen({datasets.begin(), datasets.end()}, seed);
  out << "#sumforge-manifest v1 seed=" << seed << '\n' << "#datasets";
  for (const DatasetSpec& d : datasets) out << '\t' << d.name;
  out << '\n';
  const std::uint64_t total = cycles * gen.cycle_length();
  for (std::uint64_t i = 0; i < total; ++i) {
    const ManifestEntry e = gen.next();
    out << datasets[e.dataset].name << '\t' << e.example << '\n';
  }
}

void write_manifest_file(std::span<const DatasetSpec> datasets,
                         std::uint64_t seed, std::uint64_t cycles,
                         const std::string& path) {
  AtomicWriter w(path);
  write_manifest(datasets, seed, cycles, w.stream());
  w.commit();
}

TrainingManifest read_manifest(std::istream& in) {
  constexpr std::string_view kHeader = "#sumforge-manifest v1 seed=";
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) {
    throw Error(ErrorCode::kMalformedLine, "line 1: missing manifest header");
  }
  TrainingManifest manifest;
  try {
    manifest.seed = std::stoull(line.substr(kHeader.size()));
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedLine, "line 1: bad seed");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("#datasets", 0) == 0) {
      // Declared order; names may also appear for the first time below.
      std::istringstream names(line.substr(9));
      std::string name;
      while (std::getline(names, name, '\t')) {
        if (!name.empty()) manifest.datasets.push_back(name);
      }
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": expected name<TAB>index");
    }
    const std::string name = line.substr(0, tab);
    auto it = std::find(manifest.datasets.begin(), manifest.datasets.end(), name);
    if (it == manifest.datasets.end()) {
      manifest.datasets.push_back(name);
      it = manifest.datasets.end() - 1;
    }
    std::size_t index = 0;
    try {
      index = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": bad index");
    }
    manifest.entries.push_back(
        {static_cast<std::size_t>(it - manifest.datasets.begin()), index});
  }
  return manifest;
}

std::size_t nearest_rank_decile(std::span<const std::size_t> sorted,
                                int decile) {
  if (sorted.empty()) return 0;
  const std::size_t n = sorted.size();
  std::size_t rank = (n * static_cast<std::size_t>(decile) + 9) / 10;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

StatsAccumulator::StatsAccumulator(std::optional<std::size_t> sample_cap,
                                   std::uint64_t seed, CopyMetric metric)
    : cap_(sample_cap), rng_(seed, fnv1a64("stats-reservoir")), metric_(metric) {}

void StatsAccumulator::add(const AlignedPair& pair) {
  src_lengths_.push_back(tokenize(pair.src).size());
  tgt_lengths_.push_back(tokenize(pair.tgt).size());
  if (!cap_ || sample_.size() < *cap_) {
    sample_.push_back(pair);
  } else if (*cap_ > 0) {
    const std::uint64_t j = rng_.below(seen_ + 1);
    if (j < *cap_) sample_[j] = pair;
  }
  ++seen_;
}

CorpusStats StatsAccumulator::finish(std::size_t jobs) const {
  if (seen_ == 0) throw Error(ErrorCode::kEmptyCorpus, "no pairs");
  CorpusStats s;
  s.n_pairs = seen_;
  auto summarize = [](std::vector<std::size_t> lengths, double& mean,
                      std::size_t& d1, std::size_t& d9) {
    std::sort(lengths.begin(), lengths.end());
    const double sum = std::accumulate(lengths.begin(), lengths.end(), 0.0);
    mean = sum / static_cast<double>(lengths.size());
    d1 = nearest_rank_decile(lengths, 1);
    d9 = nearest_rank_decile(lengths, 9);
  };
  summarize(src_lengths_, s.src_mean, s.src_d1, s.src_d9);
  summarize(tgt_lengths_, s.tgt_mean, s.tgt_d1, s.tgt_d9);

  std::vector<double> copies(sample_.size());
  parallel_for(sample_.size(), jobs, [&](std::size_t i) {
    copies[i] = copy_percent(metric_tokens(sample_[i].tgt),
                             metric_tokens(sample_[i].src), metric_);
  });
  s.extractivity_sample = sample_.size();
  if (!copies.empty()) {
    s.extractivity = std::accumulate(copies.begin(), copies.end(), 0.0) /
                     static_cast<double>(copies.size());
  }
  return s;
}

CorpusStats corpus_stats(std::span<const AlignedPair> pairs,
                         std::optional<std::size_t> sample_cap,
                         std::uint64_t seed, std::size_t jobs,
                         CopyMetric metric) {
  StatsAccumulator acc(sample_cap, seed, metric);
  for (const AlignedPair& p : pairs) acc.add(p);
  return acc.finish(jobs);
}

CorpusStats corpus_stats_file(const std::string& path,
                              std::optional<std::size_t> sample_cap,
                              std::uint64_t seed, std::size_t jobs,
                              CopyMetric metric) {
  StatsAccumulator acc(sample_cap, seed, metric);
  JsonlReader reader(path);
  while (auto pair = reader.next()) acc.add(*pair);
  return acc.finish(jobs);
}

std::string stats_json(const CorpusStats& s) {
  json obj = {{"n_pairs", s.n_pairs},
              {"src", {{"mean", s.src_mean}, {"d1", s.src_d1}, {"d9", s.src_d9}}},
              {"tgt", {{"mean", s.tgt_mean}, {"d1", s.tgt_d1}, {"d9", s.tgt_d9}}},
              {"extractivity", s.extractivity},
              {"extractivity_sample", s.extractivity_sample}};
  return obj.dump();
}

}  // namespace sumforge
