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

// Synthetic French-like meeting corpus for demos and tests.

#ifndef SUMFORGE_TOY_H_
#define SUMFORGE_TOY_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sumforge/corpus.h"

namespace sumforge {

// A report (tgt) and its transcription-like source. The report length in
// tokens is lognormal (median 86, sigma 0.9, at least 5); the source
// rewords about a third of it and adds fillers and false starts, which
// makes it roughly 1.33 times longer.
AlignedPair toy_pair(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t index);

struct ToyCorpus {
  std::string manual;     // n pairs
  std::string automatic;  // 3n pairs
  std::string reports;    // 5n reports ({"tgt": ...})
  std::string valid;      // max(1, n / 10) pairs
};

// Writes manual.jsonl, automatic.jsonl, reports.jsonl and valid.jsonl
// under out_dir. Throws Error(kInvalidArgument) for n_pairs == 0.
ToyCorpus gen_toy_corpus(std::size_t n_pairs, std::uint64_t seed,
                         const std::string& out_dir);

}  // namespace sumforge

#endif  // SUMFORGE_TOY_H_
