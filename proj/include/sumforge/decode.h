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

// Beam search over an abstract next-token scorer, with optional trigram
// repetition blocking inside each hypothesis.

#ifndef SUMFORGE_DECODE_H_
#define SUMFORGE_DECODE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sumforge/tokenize.h"

namespace sumforge {

// Id 0 is end-of-sequence, id 1 the unknown token; the remaining ids
// follow the order given at construction.
class Vocabulary {
 public:
  static constexpr int kEos = 0;
  static constexpr int kUnk = 1;
  static constexpr std::string_view kEosToken = "</s>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}
  // Duplicates and the reserved tokens are ignored.
  explicit Vocabulary(const std::vector<std::string>& tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  int id(std::string_view token) const;  // kUnk when absent
  const std::string& token(int id) const { return tokens_.at(id); }

  std::vector<int> encode(std::span<const std::string> tokens) const;
  Tokens decode(std::span<const int> ids) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Next-token model. log_probs() must fill `out` with vocab().size()
// log-probabilities (index Vocabulary::kEos for end-of-sequence) of a
// normalized distribution; -infinity marks impossible tokens.
// Implementations must be safe to call concurrently.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const Vocabulary& vocab() const = 0;
  virtual void log_probs(std::span<const int> source,
                         std::span<const int> prefix,
                         std::vector<double>& out) const = 0;
};

struct DecodeConfig {
  std::size_t beam_size = 5;
  std::size_t max_len = 600;
  bool block_trigrams = true;
  double length_penalty_alpha = 0.0;  // score / length^alpha

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct DecodeResult {
  std::vector<int> ids;
  Tokens tokens;
  double score = 0.0;             // summed log-probability
  double normalized_score = 0.0;  // score / max(len, 1)^alpha
  // False when no hypothesis reached end-of-sequence (the scorer ruled it
  // out until max_len); the best unfinished hypothesis is returned.
  bool finished = true;
};

// True if appending `next` to `prefix` repeats a trigram already in it.
bool creates_repeated_trigram(std::span<const int> prefix, int next);
bool has_repeated_trigram(std::span<const std::string> tokens);

// Returns the finished hypothesis with the best normalized score. Ties
// between equal scores are broken by lexicographic id order. Hypotheses
// reaching max_len tokens must emit end-of-sequence next. Blocked or
// impossible continuations are dropped from the candidate set, so a fully
// blocked hypothesis can still end.
DecodeResult beam_search_ids(const Scorer& scorer, std::span<const int> source,
                             const DecodeConfig& cfg);

DecodeResult beam_search(const Scorer& scorer,
                         std::span<const std::string> source,
                         const DecodeConfig& cfg);

// Order-preserving; each result equals the standalone beam_search call.
// Failures are rethrown with the item index prefixed to the message.
std::vector<DecodeResult> batch_decode(const Scorer& scorer,
                                       std::span<const Tokens> sources,
                                       const DecodeConfig& cfg,
                                       std::size_t jobs = 1);

}  // namespace sumforge

#endif  // SUMFORGE_DECODE_H_
