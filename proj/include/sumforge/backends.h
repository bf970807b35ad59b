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

// Summarizer backends. Built-in kinds:
//
//   identity     returns the source
//   lead_k       first k sentences                   (k, default 3)
//   noisy_clone  denoising noise applied to the source (p, lambda, permute,
//                mask); example index = item id
//   ngram_lm     beam search over an n-gram LM trained on a JSONL file
//                (train, order=3, smoothing=0.01, copy_weight=0.5)
//   external     file-based command protocol          (cmd, cwd)
//
// External protocol: the command template's {in} and {out} placeholders
// are replaced by file paths. The input file holds one {"id": int,
// "src": string} object per line; the command must write one
// {"id": int, "pred": string} per input id to the output file and exit 0.
// SUMFORGE_BACKEND_TIMEOUT_SECS bounds its wall time.

#ifndef SUMFORGE_BACKENDS_H_
#define SUMFORGE_BACKENDS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumforge/decode.h"

namespace sumforge {

enum class BackendKind { kIdentity, kLeadK, kNoisyClone, kNgramLm, kExternal };

std::string_view backend_kind_name(BackendKind kind);

struct BackendSpec {
  BackendKind kind = BackendKind::kIdentity;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;

  // "kind" or "kind:key=value,key=value". A "cmd=" entry must come last
  // and takes the rest of the string verbatim, commas included.
  static BackendSpec parse(std::string_view text);
};

struct BackendItem {
  std::uint64_t id = 0;
  std::string src;
};

class Backend {
 public:
  virtual ~Backend() = default;

  // One prediction per item, in input order. Throws Error(kBackendFailure)
  // with the failing item index when a prediction cannot be produced.
  virtual std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) = 0;

  std::string summarize(std::string_view src);
};

// Validates kind-specific parameters (Error(kConfig) on unknown keys or
// bad values). `decode` configures ngram_lm beam search; `jobs` bounds
// the worker pool of built-in backends.
std::unique_ptr<Backend> make_backend(const BackendSpec& spec,
                                      const DecodeConfig& decode = {},
                                      std::size_t jobs = 1);

std::string summarize(const BackendSpec& spec, std::string_view src);

// Wall-time limit from SUMFORGE_BACKEND_TIMEOUT_SECS; 0 means none.
double backend_timeout_seconds();

}  // namespace sumforge

#endif  // SUMFORGE_BACKENDS_H_
