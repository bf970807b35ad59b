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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sumforge/corpus.h"
#include "sumforge/error.h"
#include "sumforge/io.h"
#include "sumforge/toy.h"

using namespace sumforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sumforge_corpus_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode parse_error(const std::string& line) {
  try {
    pair_from_json(line, 3);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("pair json round trip") {
  const AlignedPair p{"bonjour \"à\" tous", "salut", "manual"};
  const std::string line = pair_to_json(p);
  CHECK(pair_from_json(line, 1) == p);
  CHECK(pair_from_json(R"({"src":"a","tgt":"b"})", 1).origin.empty());
}

TEST_CASE("pair json errors") {
  CHECK(parse_error("{not json") == ErrorCode::kMalformedLine);
  CHECK(parse_error(R"(["a"])") == ErrorCode::kMalformedLine);
  CHECK(parse_error(R"({"src":1,"tgt":"b"})") == ErrorCode::kMalformedLine);
  CHECK(parse_error(R"({"tgt":"b"})") == ErrorCode::kMissingField);
  CHECK(parse_error(R"({"src":"a","tgt":"  "})") == ErrorCode::kEmptyField);
}

TEST_CASE("jsonl files and swap") {
  const fs::path dir = scratch("jsonl");
  const std::vector<AlignedPair> pairs{{"s1", "t1", "manual"}, {"s2", "t2", "manual"}};
  write_jsonl(pairs, (dir / "a.jsonl").string());
  CHECK(read_jsonl((dir / "a.jsonl").string()) == pairs);
  CHECK(count_records((dir / "a.jsonl").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "a.jsonl.tmp"));
  const auto swapped = swap_direction(pairs);
  CHECK(swapped[1] == AlignedPair{"t2", "s2", "manual-rev"});
  {
    std::ofstream out(dir / "r.jsonl");
    out << R"({"tgt":"rapport un"})" << "\n\n" << R"({"tgt":"rapport deux"})" << "\n";
  }
  CHECK(read_reports((dir / "r.jsonl").string()) ==
        std::vector<std::string>{"rapport un", "rapport deux"});
}

TEST_CASE("uncommitted writer leaves nothing") {
  const fs::path dir = scratch("atomic");
  {
    AtomicWriter w((dir / "x.txt").string());
    w.stream() << "partial";
  }
  CHECK_FALSE(fs::exists(dir / "x.txt"));
  CHECK_FALSE(fs::exists(dir / "x.txt.tmp"));
}

TEST_CASE("weighted schedule has exact per-cycle counts") {
  const std::vector<DatasetSpec> sets{
      {"manual", "", 2, 4}, {"automatic", "", 7, 14}, {"back", "", 100, 200}};
  const TrainingManifest m = weighted_interleave(sets, 0, 3);
  REQUIRE(m.entries.size() == 3 * 109);
  for (std::size_t cycle = 0; cycle < 3; ++cycle) {
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < 109; ++i) ++counts[m.entries[cycle * 109 + i].dataset];
    CHECK(counts[0] == 2);
    CHECK(counts[1] == 7);
    CHECK(counts[2] == 100);
  }
}

TEST_CASE("manifest text round trip and determinism") {
  const std::vector<DatasetSpec> sets{{"a", "", 1, 3}, {"b", "", 2, 5}};
  std::ostringstream one, two;
  write_manifest(sets, 9, 4, one);
  write_manifest(sets, 9, 4, two);
  CHECK(one.str() == two.str());
  CHECK(one.str().rfind("#sumforge-manifest v1 seed=9\n#datasets\ta\tb\n", 0) == 0);
  std::istringstream in(one.str());
  const TrainingManifest back = read_manifest(in);
  CHECK(back.entries == weighted_interleave(sets, 9, 4).entries);
  CHECK(back.datasets == std::vector<std::string>{"a", "b"});
}

TEST_CASE("schedule errors") {
  CHECK_THROWS_AS(ManifestGenerator({{"a", "", 1, 0}}, 0), Error);
  CHECK_THROWS_AS(ManifestGenerator({{"a", "", 0, 3}}, 0), Error);
  CHECK_THROWS_AS(ManifestGenerator({{"a", "", 1, 3}, {"a", "", 1, 3}}, 0), Error);
}

TEST_CASE("upsample rates at full corpus scale") {
  const std::vector<DatasetSpec> sets{{"manual", "", 2, 21000},
                                      {"automatic", "", 7, 68000},
                                      {"back", "", 100, 6300000}};
  const std::uint64_t cycles = cycles_for_one_pass(sets);
  CHECK(cycles == 63000);
  const auto rates = upsample_rates(sets, cycles);
  CHECK(rates[0] == doctest::Approx(6.0));
  CHECK(rates[1] == doctest::Approx(6.485).epsilon(0.001));
  CHECK(rates[2] == doctest::Approx(1.0));
}

TEST_CASE("nearest rank deciles") {
  const std::vector<std::size_t> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  // ceil(11 * 1 / 10) = 2, ceil(11 * 9 / 10) = 10.
  CHECK(nearest_rank_decile(v, 1) == 2);
  CHECK(nearest_rank_decile(v, 9) == 10);
  const std::vector<std::size_t> one{7};
  CHECK(nearest_rank_decile(one, 1) == 7);
  CHECK(nearest_rank_decile(one, 9) == 7);
}

TEST_CASE("stats on a small corpus") {
  const std::vector<AlignedPair> pairs{{"a b c d", "a b", ""}, {"x y", "x y", ""}};
  const CorpusStats s = corpus_stats(pairs);
  CHECK(s.n_pairs == 2);
  CHECK(s.src_mean == doctest::Approx(3.0));
  CHECK(s.tgt_mean == doctest::Approx(2.0));
  // copy% F1: (2*1*0.5/1.5 = 66.67) and 100 -> mean 83.33.
  CHECK(s.extractivity == doctest::Approx((200.0 / 3 + 100.0) / 2));
  CHECK(s.extractivity_sample == 2);
  CHECK_THROWS_AS(corpus_stats({}), Error);
}

TEST_CASE("dataset specs from toml") {
  const fs::path dir = scratch("toml");
  write_jsonl(std::vector<AlignedPair>{{"a", "b", ""}, {"c", "d", ""}},
              (dir / "x.jsonl").string());
  {
    std::ofstream out(dir / "sets.toml");
    out << "[[dataset]]\nname = \"x\"\npath = \"x.jsonl\"\nweight = 3\n";
  }
  const auto specs = load_dataset_specs((dir / "sets.toml").string());
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].size == 2);
  CHECK(specs[0].weight == 3);
  CHECK(fs::path(specs[0].path) == dir / "x.jsonl");
  {
    std::ofstream out(dir / "bad.toml");
    out << "[[dataset]]\nname = \"x\"\npath = \"x.jsonl\"\nweight = 0\n";
  }
  CHECK_THROWS_AS(load_dataset_specs((dir / "bad.toml").string()), Error);
}

TEST_CASE("toy manual stats golden") {
  // Values recomputed by tests/oracles/stats_oracle.py.
  const auto dir = std::filesystem::temp_directory_path() / "sumforge_stats_golden";
  const ToyCorpus toy = gen_toy_corpus(100, 0, dir.string());
  const CorpusStats s = corpus_stats_file(toy.manual, std::nullopt);
  CHECK(s.n_pairs == 100);
  CHECK(s.src_d1 == 35);
  CHECK(s.src_d9 == 442);
  CHECK(s.src_mean == doctest::Approx(195.52).epsilon(1e-12));
  CHECK(s.tgt_d1 == 28);
  CHECK(s.tgt_d9 == 346);
  CHECK(s.tgt_mean == doctest::Approx(151.66).epsilon(1e-12));
  CHECK(s.extractivity == doctest::Approx(60.99062189687).epsilon(1e-11));
  std::filesystem::remove_all(dir);
}
