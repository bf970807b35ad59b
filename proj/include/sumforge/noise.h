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

// Denoising pair synthesis for target-side pre-training: sentence
// permutation followed by text infilling, where contiguous spans with
// Poisson-distributed lengths are each replaced by a single mask token.
// Zero-length spans insert a mask without removing anything.

#ifndef SUMFORGE_NOISE_H_
#define SUMFORGE_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sumforge/rng.h"
#include "sumforge/tokenize.h"

namespace sumforge {

struct NoiseConfig {
  double infill_p = 0.3;      // fraction of tokens covered by spans
  double span_lambda = 3.0;   // Poisson mean of span lengths
  bool permute_sentences = true;
  std::string mask_token = "<mask>";
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void validate() const;
};

struct Span {
  std::size_t start = 0;
  std::size_t length = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct DenoisingPair {
  Document noisy;  // model input
  Document clean;  // model target
};

// Draws span lengths i.i.d. from Poisson(span_lambda) until the covered
// token count reaches round(infill_p * num_tokens). Each span occupies the
// positions [start, start + max(length, 1)), so a zero-length span claims
// the insertion point before token `start`; spans never share positions.
// Starts are uniform over free placements (rejection sampling, then an
// exact scan when the document is crowded). A draw longer than every free
// run is truncated to the longest run. The final span may overshoot the
// budget. Result is sorted by start.
std::vector<Span> sample_spans(std::size_t num_tokens, const NoiseConfig& cfg,
                               CounterRng& rng);

// Replaces each span by one mask token, keeping it in the sentence where
// the span starts; sentences emptied by a crossing span are dropped. A
// zero-length span may start at token_count() (append at the end).
// Throws Error(kSpanOutOfRange) for unsorted, overlapping or out-of-range
// spans.
Document text_infill(const Document& doc, std::span<const Span> spans,
                     const NoiseConfig& cfg);

// Uniform random reordering of sentences (Fisher-Yates).
Document sentence_permute(const Document& doc, CounterRng& rng);

// The generator is keyed by (cfg.seed, example_index), so any example can
// be produced independently of the others.
// Throws Error(kEmptyDocument) for a report with no tokens and
// Error(kInvalidArgument) if the report already contains the mask token.
DenoisingPair make_denoising_pair(const Document& report,
                                  const NoiseConfig& cfg,
                                  std::uint64_t example_index);

}  // namespace sumforge

#endif  // SUMFORGE_NOISE_H_
