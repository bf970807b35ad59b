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

#include "sumforge/ngram.h"

#include <cmath>
#include <limits>
#include <set>

#include "sumforge/error.h"

namespace sumforge {
namespace {

constexpr int kBegin = -1;

}  // namespace

std::string NgramLm::context_key(std::span<const int> history) const {
  const std::size_t width = static_cast<std::size_t>(order_ - 1);
  std::string key;
  key.reserve(width * sizeof(int));
  for (std::size_t i = 0; i < width; ++i) {
    // Right-aligned window over history, padded with kBegin on the left.
    const std::size_t from_end = width - i;
    const int id = from_end <= history.size()
                       ? history[history.size() - from_end]
                       : kBegin;
    key.append(reinterpret_cast<const char*>(&id), sizeof(int));
  }
  return key;
}

NgramLm NgramLm::train(std::span<const Tokens> sequences, int order,
                       double smoothing) {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "order must be >= 1");
  if (!(smoothing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing must be > 0");
  }
  std::set<std::string> words;
  std::size_t total_tokens = 0;
  for (const Tokens& seq : sequences) {
    words.insert(seq.begin(), seq.end());
    total_tokens += seq.size();
  }
  if (total_tokens == 0) throw Error(ErrorCode::kEmptyCorpus, "no tokens");

  NgramLm lm(order, smoothing,
             Vocabulary(std::vector<std::string>(words.begin(), words.end())));
  std::vector<int> ids;
  for (const Tokens& seq : sequences) {
    if (seq.empty()) continue;
    ids = lm.vocab_.encode(seq);
    ids.push_back(Vocabulary::kEos);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      Context& ctx = lm.contexts_[lm.context_key(std::span(ids).first(i))];
      ++ctx.total;
      ++ctx.next[ids[i]];
    }
  }
  return lm;
}

double NgramLm::prob(std::span<const int> history, int next) const {
  const double v = static_cast<double>(vocab_.size());
  const auto it = contexts_.find(context_key(history));
  if (it == contexts_.end()) return 1.0 / v;
  const auto nit = it->second.next.find(next);
  const double count = nit == it->second.next.end() ? 0.0 : nit->second;
  return (count + smoothing_) /
         (static_cast<double>(it->second.total) + smoothing_ * v);
}

void NgramLm::distribution(std::span<const int> history,
                           std::vector<double>& out) const {
  const std::size_t v = vocab_.size();
  out.assign(v, 1.0 / static_cast<double>(v));
  const auto it = contexts_.find(context_key(history));
  if (it == contexts_.end()) return;
  const double denom =
      static_cast<double>(it->second.total) + smoothing_ * static_cast<double>(v);
  for (std::size_t w = 0; w < v; ++w) out[w] = smoothing_ / denom;
  for (const auto& [w, c] : it->second.next) {
    out[static_cast<std::size_t>(w)] = (static_cast<double>(c) + smoothing_) / denom;
  }
}

NgramLm train_ngram(std::span<const AlignedPair> pairs, int order,
                    double smoothing) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no pairs");
  std::vector<Tokens> sequences;
  sequences.reserve(pairs.size());
  for (const AlignedPair& p : pairs) sequences.push_back(tokenize(p.tgt));
  return NgramLm::train(sequences, order, smoothing);
}

NgramScorer::NgramScorer(const NgramLm& lm, double copy_weight)
    : lm_(lm), copy_weight_(copy_weight) {
  if (!(copy_weight >= 0.0 && copy_weight <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "copy_weight must lie in [0, 1]");
  }
}

void NgramScorer::log_probs(std::span<const int> source,
                            std::span<const int> prefix,
                            std::vector<double>& out) const {
  std::vector<double> p;
  lm_.distribution(prefix, p);
  if (copy_weight_ > 0.0 && !source.empty()) {
    const double share = copy_weight_ / static_cast<double>(source.size());
    for (double& x : p) x *= 1.0 - copy_weight_;
    for (int id : source) p[static_cast<std::size_t>(id)] += share;
  }
  out.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = p[i] > 0.0 ? std::log(p[i])
                        : -std::numeric_limits<double>::infinity();
  }
}

}  // namespace sumforge
