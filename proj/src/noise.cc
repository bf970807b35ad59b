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

#include "sumforge/noise.h"

#include <algorithm>
#include <cmath>

#include "sumforge/error.h"

namespace sumforge {
namespace {

constexpr int kPlacementAttempts = 32;

// Occupancy map over token positions.
class Slots {
 public:
  explicit Slots(std::size_t n) : used_(n, false), free_(n) {}

  std::size_t free_count() const { return free_; }

  bool is_free(std::size_t start, std::size_t width) const {
    for (std::size_t i = start; i < start + width; ++i) {
      if (used_[i]) return false;
    }
    return true;
  }

  void occupy(std::size_t start, std::size_t width) {
    for (std::size_t i = start; i < start + width; ++i) used_[i] = true;
    free_ -= width;
  }

  std::size_t longest_free_run() const {
    std::size_t best = 0;
    std::size_t run = 0;
    for (bool u : used_) {
      run = u ? 0 : run + 1;
      best = std::max(best, run);
    }
    return best;
  }

  // Start positions of every free window of `width`.
  std::vector<std::size_t> free_starts(std::size_t width) const {
    std::vector<std::size_t> starts;
    std::size_t run = 0;
    for (std::size_t i = 0; i < used_.size(); ++i) {
      run = used_[i] ? 0 : run + 1;
      if (run >= width) starts.push_back(i + 1 - width);
    }
    return starts;
  }

 private:
  std::vector<bool> used_;
  std::size_t free_;
};

}  // namespace

void NoiseConfig::validate() const {
  if (!(infill_p >= 0.0 && infill_p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "infill_p must lie in [0, 1]");
  }
  if (!(span_lambda >= 0.0) || !std::isfinite(span_lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "span_lambda must be >= 0");
  }
  if (mask_token.empty() ||
      mask_token.find_first_of(" \t\r\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask_token must be a non-empty token without whitespace");
  }
}

std::vector<Span> sample_spans(std::size_t num_tokens, const NoiseConfig& cfg,
                               CounterRng& rng) {
  cfg.validate();
  const auto budget = static_cast<std::size_t>(
      std::llround(cfg.infill_p * static_cast<double>(num_tokens)));
  std::vector<Span> spans;
  if (budget == 0) return spans;

  Slots slots(num_tokens);
  std::size_t covered = 0;
  while (covered < budget && slots.free_count() > 0) {
    std::size_t length = rng.poisson(cfg.span_lambda);
    std::size_t width = std::max<std::size_t>(length, 1);
    std::size_t start = num_tokens;
    if (width <= num_tokens) {
      for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        const std::size_t s = rng.below(num_tokens - width + 1);
        if (slots.is_free(s, width)) {
          start = s;
          break;
        }
      }
    }
    if (start == num_tokens) {
      std::vector<std::size_t> starts = slots.free_starts(width);
      if (starts.empty()) {
        length = width = slots.longest_free_run();
        starts = slots.free_starts(width);
      }
      start = starts[rng.below(starts.size())];
    }
    slots.occupy(start, width);
    covered += length;
    spans.push_back({start, length});
  }
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  return spans;
}

Document text_infill(const Document& doc, std::span<const Span> spans,
                     const NoiseConfig& cfg) {
  const std::size_t n = doc.token_count();
  std::size_t next_free = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& s = spans[i];
    const bool in_range = s.length == 0 ? s.start <= n : s.start + s.length <= n;
    if (!in_range || s.start < next_free) {
      throw Error(ErrorCode::kSpanOutOfRange,
                  "span " + std::to_string(i) + " (" + std::to_string(s.start) +
                      "," + std::to_string(s.length) + ") invalid for " +
                      std::to_string(n) + " tokens");
    }
    next_free = s.start + std::max<std::size_t>(s.length, 1);
  }
  if (spans.empty()) return doc;

  std::vector<Tokens> sentences(std::max<std::size_t>(doc.sentences.size(), 1));
  std::size_t span_idx = 0;
  std::size_t skip = 0;
  std::size_t pos = 0;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    for (const std::string& token : doc.sentences[si]) {
      if (span_idx < spans.size() && spans[span_idx].start == pos) {
        sentences[si].push_back(cfg.mask_token);
        skip = spans[span_idx].length;
        ++span_idx;
      }
      if (skip > 0) {
        --skip;
      } else {
        sentences[si].push_back(token);
      }
      ++pos;
    }
  }
  if (span_idx < spans.size()) {
    // Zero-length span at the very end.
    sentences.back().push_back(cfg.mask_token);
  }
  Document out;
  for (Tokens& s : sentences) {
    if (!s.empty()) out.sentences.push_back(std::move(s));
  }
  return out;
}

Document sentence_permute(const Document& doc, CounterRng& rng) {
  Document out = doc;
  shuffle(std::span<Tokens>(out.sentences), rng);
  return out;
}

DenoisingPair make_denoising_pair(const Document& report,
                                  const NoiseConfig& cfg,
                                  std::uint64_t example_index) {
  cfg.validate();
  if (report.token_count() == 0) {
    throw Error(ErrorCode::kEmptyDocument,
                "empty report at index " + std::to_string(example_index));
  }
  for (const Tokens& s : report.sentences) {
    if (std::find(s.begin(), s.end(), cfg.mask_token) != s.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "report " + std::to_string(example_index) +
                      " already contains mask token " + cfg.mask_token);
    }
  }
  const CounterRng base(cfg.seed, example_index);
  CounterRng permute_rng = base.split(0);
  CounterRng span_rng = base.split(1);

  DenoisingPair pair{report, report};
  if (cfg.permute_sentences) pair.noisy = sentence_permute(report, permute_rng);
  const std::vector<Span> spans =
      sample_spans(pair.noisy.token_count(), cfg, span_rng);
  pair.noisy = text_infill(pair.noisy, spans, cfg);
  return pair;
}

}  // namespace sumforge
