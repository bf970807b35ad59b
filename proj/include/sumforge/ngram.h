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

// Add-k smoothed n-gram language model used as a desk-scale stand-in for
// a trained sequence-to-sequence model.

#ifndef SUMFORGE_NGRAM_H_
#define SUMFORGE_NGRAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sumforge/corpus.h"
#include "sumforge/decode.h"

namespace sumforge {

// P(w | h) = (c(h, w) + k) / (c(h) + k * V), where h is the previous
// order-1 ids (padded with a begin marker), V the vocabulary size
// including end-of-sequence and unknown, and every training sequence ends
// with end-of-sequence.
class NgramLm {
 public:
  // Throws Error(kEmptyCorpus) when no sequence has tokens and
  // Error(kInvalidArgument) for order < 1 or smoothing <= 0.
  static NgramLm train(std::span<const Tokens> sequences, int order,
                       double smoothing);

  int order() const noexcept { return order_; }
  double smoothing() const noexcept { return smoothing_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }

  double prob(std::span<const int> history, int next) const;

  // Fills out[v] = P(v | history) for every id.
  void distribution(std::span<const int> history, std::vector<double>& out) const;

 private:
  struct Context {
    std::uint64_t total = 0;
    std::unordered_map<int, std::uint64_t> next;
  };

  NgramLm(int order, double smoothing, Vocabulary vocab)
      : order_(order), smoothing_(smoothing), vocab_(std::move(vocab)) {}

  std::string context_key(std::span<const int> history) const;

  int order_;
  double smoothing_;
  Vocabulary vocab_;
  std::unordered_map<std::string, Context> contexts_;
};

// Trains on the tokenized target side of each pair.
NgramLm train_ngram(std::span<const AlignedPair> pairs, int order,
                    double smoothing);

// Scorer interpolating the LM with the unigram distribution of the
// source tokens: (1 - copy_weight) * P_lm + copy_weight * P_src. With
// copy_weight 0 the source is ignored.
class NgramScorer : public Scorer {
 public:
  NgramScorer(const NgramLm& lm, double copy_weight);

  const Vocabulary& vocab() const override { return lm_.vocab(); }
  void log_probs(std::span<const int> source, std::span<const int> prefix,
                 std::vector<double>& out) const override;

 private:
  const NgramLm& lm_;
  double copy_weight_;
};

}  // namespace sumforge

#endif  // SUMFORGE_NGRAM_H_
