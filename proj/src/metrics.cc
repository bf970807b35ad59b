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

#include "sumforge/metrics.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <unordered_map>

#include "sumforge/error.h"
#include "sumforge/parallel.h"

namespace sumforge {
namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// Unit separator cannot occur inside tokens produced by the tokenizer.
NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n,
                         std::size_t& total) {
  NgramCounts counts;
  total = tokens.size() >= n ? tokens.size() - n + 1 : 0;
  for (std::size_t i = 0; i < total; ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key.append(tokens[i + k]);
    }
    ++counts[key];
  }
  return counts;
}

std::string two_decimals(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

}  // namespace

RougeScore RougeScore::from_counts(std::size_t matches, std::size_t pred_total,
                                   std::size_t ref_total) {
  RougeScore s;
  if (pred_total > 0) s.precision = static_cast<double>(matches) / pred_total;
  if (ref_total > 0) s.recall = static_cast<double>(matches) / ref_total;
  if (s.precision + s.recall > 0) {
    s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

RougeScore rouge_n(std::span<const std::string> pred,
                   std::span<const std::string> ref, int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "ROUGE-N needs n >= 1");
  }
  std::size_t pred_total = 0;
  std::size_t ref_total = 0;
  const NgramCounts pred_counts =
      count_ngrams(pred, static_cast<std::size_t>(n), pred_total);
  const NgramCounts ref_counts =
      count_ngrams(ref, static_cast<std::size_t>(n), ref_total);
  std::size_t matches = 0;
  for (const auto& [gram, count] : pred_counts) {
    const auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) matches += std::min(count, it->second);
  }
  return RougeScore::from_counts(matches, pred_total, ref_total);
}

namespace {

// First-byte check before the full comparison; most DP cells mismatch.
inline bool same_token(const std::string& x, const std::string& y) {
  return x.size() == y.size() &&
         (x.empty() ||
          (x[0] == y[0] && std::equal(x.begin() + 1, x.end(), y.begin() + 1)));
}

}  // namespace

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // One row plus the diagonal; short rows live on the stack.
  constexpr std::size_t kStackRow = 64;
  std::array<std::uint32_t, kStackRow + 1> stack_row{};
  std::vector<std::uint32_t> heap_row;
  std::uint32_t* row = stack_row.data();
  if (b.size() > kStackRow) {
    heap_row.assign(b.size() + 1, 0);
    row = heap_row.data();
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint32_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::uint32_t up = row[j];
      row[j] = same_token(a[i], b[j - 1]) ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

RougeScore rouge_l(std::span<const std::string> pred,
                   std::span<const std::string> ref) {
  return RougeScore::from_counts(lcs_length(pred, ref), pred.size(),
                                 ref.size());
}

CopyMetric parse_copy_metric(std::string_view name) {
  if (name == "f1") return CopyMetric::kF1;
  if (name == "precision") return CopyMetric::kPrecision;
  throw Error(ErrorCode::kInvalidArgument,
              "copy metric must be f1 or precision, got '" + std::string(name) +
                  "'");
}

double copy_percent(std::span<const std::string> pred,
                    std::span<const std::string> src, CopyMetric metric) {
  const RougeScore s = rouge_n(pred, src, 1);
  return 100.0 * (metric == CopyMetric::kF1 ? s.f1 : s.precision);
}

EvalReport evaluate_corpus(std::span<const EvalExample> examples,
                           CopyMetric copy_metric, std::size_t jobs) {
  if (examples.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no examples to evaluate");
  }
  struct PerExample {
    RougeScore r1, r2, rl;
    double copy = 0.0;
  };
  std::vector<PerExample> scores(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const EvalExample& ex = examples[i];
    PerExample& out = scores[i];
    out.r1 = rouge_n(ex.pred, ex.ref, 1);
    out.r2 = rouge_n(ex.pred, ex.ref, 2);
    out.rl = rouge_l(ex.pred, ex.ref);
    if (ex.src) out.copy = copy_percent(ex.pred, *ex.src, copy_metric);
  });

  const bool all_sources =
      std::all_of(examples.begin(), examples.end(),
                  [](const EvalExample& ex) { return ex.src.has_value(); });
  EvalReport report;
  report.num_examples = examples.size();
  double copy_sum = 0.0;
  auto accumulate = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const PerExample& s : scores) {
    accumulate(report.r1, s.r1);
    accumulate(report.r2, s.r2);
    accumulate(report.rl, s.rl);
    copy_sum += s.copy;
  }
  const double n = static_cast<double>(examples.size());
  for (RougeScore* s : {&report.r1, &report.r2, &report.rl}) {
    s->precision /= n;
    s->recall /= n;
    s->f1 /= n;
  }
  if (all_sources) report.copy_pct = copy_sum / n;
  return report;
}

EvalReport evaluate_texts(std::span<const std::string> predictions,
                          std::span<const std::string> references,
                          std::span<const std::string> sources,
                          CopyMetric copy_metric, std::size_t jobs) {
  if (predictions.size() != references.size() ||
      (!sources.empty() && sources.size() != predictions.size())) {
    throw Error(ErrorCode::kLengthMismatch,
                "predictions=" + std::to_string(predictions.size()) +
                    " references=" + std::to_string(references.size()) +
                    " sources=" + std::to_string(sources.size()));
  }
  std::vector<EvalExample> examples(predictions.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    examples[i].pred = metric_tokens(predictions[i]);
    examples[i].ref = metric_tokens(references[i]);
    if (!sources.empty()) examples[i].src = metric_tokens(sources[i]);
  });
  return evaluate_corpus(examples, copy_metric, jobs);
}

std::string format_percent(double percent) { return two_decimals(percent); }

std::string format_rouge_row(double r1, double r2, double rl) {
  return two_decimals(r1) + " / " + two_decimals(r2) + " / " + two_decimals(rl);
}

std::string format_report_row(const EvalReport& report) {
  std::string row = format_rouge_row(100.0 * report.r1.f1, 100.0 * report.r2.f1,
                                     100.0 * report.rl.f1);
  if (report.copy_pct) row += "\t" + format_percent(*report.copy_pct);
  return row;
}

std::string report_json(const EvalReport& report) {
  std::string out = "{\"r1\": " + two_decimals(100.0 * report.r1.f1) +
                    ", \"r2\": " + two_decimals(100.0 * report.r2.f1) +
                    ", \"rl\": " + two_decimals(100.0 * report.rl.f1) +
                    ", \"copy_pct\": ";
  out += report.copy_pct ? two_decimals(*report.copy_pct) : "null";
  out += ", \"n\": " + std::to_string(report.num_examples) + "}";
  return out;
}

}  // namespace sumforge
