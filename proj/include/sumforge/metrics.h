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

// ROUGE-N, ROUGE-L and copy% (ROUGE-1 between a text and its source).
//
// Scores are plain per-pair values in [0, 1]; corpus scores are macro
// averages. Text entry points tokenize with metric_tokens() (lowercased,
// no stemming, no stopword removal).

#ifndef SUMFORGE_METRICS_H_
#define SUMFORGE_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumforge/tokenize.h"

namespace sumforge {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // Zero totals give zero scores.
  static RougeScore from_counts(std::size_t matches, std::size_t pred_total,
                                std::size_t ref_total);
};

// Clipped n-gram overlap. n must be >= 1 (Error(kInvalidArgument)).
RougeScore rouge_n(std::span<const std::string> pred,
                   std::span<const std::string> ref, int n);

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

// LCS-based, beta = 1.
RougeScore rouge_l(std::span<const std::string> pred,
                   std::span<const std::string> ref);

enum class CopyMetric { kF1, kPrecision };

CopyMetric parse_copy_metric(std::string_view name);

// 100 x ROUGE-1 of pred with the source as reference.
double copy_percent(std::span<const std::string> pred,
                    std::span<const std::string> src,
                    CopyMetric metric = CopyMetric::kF1);

struct EvalExample {
  Tokens pred;
  Tokens ref;
  std::optional<Tokens> src;
};

struct EvalReport {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl;
  std::optional<double> copy_pct;  // set when every example has a source
  std::size_t num_examples = 0;
};

// Per-example scores, then the arithmetic mean in index order. Throws
// Error(kEmptyCorpus) for no examples.
EvalReport evaluate_corpus(std::span<const EvalExample> examples,
                           CopyMetric copy_metric = CopyMetric::kF1,
                           std::size_t jobs = 1);

// Tokenizes with metric_tokens(). `sources` may be empty; otherwise all
// three lists must have equal length (Error(kLengthMismatch)).
EvalReport evaluate_texts(std::span<const std::string> predictions,
                          std::span<const std::string> references,
                          std::span<const std::string> sources,
                          CopyMetric copy_metric = CopyMetric::kF1,
                          std::size_t jobs = 1);

// Two-decimal percentage, e.g. 79.36.
std::string format_percent(double percent);

// "R1 / R2 / RL" from percentages, e.g. "52.31 / 34.00 / 49.70".
std::string format_rouge_row(double r1, double r2, double rl);

// Table row from F scores: "R1 / R2 / RL" (and copy%, when present, after
// a tab).
std::string format_report_row(const EvalReport& report);

// {"r1": .., "r2": .., "rl": .., "copy_pct": ..} with F scores as
// two-decimal percentages; copy_pct is null without sources.
std::string report_json(const EvalReport& report);

}  // namespace sumforge

#endif  // SUMFORGE_METRICS_H_
