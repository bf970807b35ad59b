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

// Word-level byte pair encoding. Merges never cross token boundaries and
// the end of a word is implicit: every piece except the last one of a word
// carries the continuation marker ("low@@ e@@ r").

#ifndef SUMFORGE_BPE_H_
#define SUMFORGE_BPE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sumforge/tokenize.h"

namespace sumforge {

struct MergeRule {
  std::string left;
  std::string right;

  friend auto operator<=>(const MergeRule&, const MergeRule&) = default;
};

inline constexpr std::string_view kDefaultBpeMarker = "@@";
inline constexpr std::size_t kDefaultBpeMerges = 16000;

// Immutable after construction; safe to share across threads.
class BpeModel {
 public:
  // Throws Error(kMalformedModel) on duplicate rules or an empty marker.
  explicit BpeModel(std::vector<MergeRule> merges,
                    std::string marker = std::string(kDefaultBpeMarker));

  const std::vector<MergeRule>& merges() const noexcept { return merges_; }
  const std::string& marker() const noexcept { return marker_; }

  // Segments every token; merges are applied in model order.
  Tokens apply(std::span<const std::string> tokens) const;

  // Inverse of apply. Throws Error(kDanglingMarker) when the last piece
  // still carries the marker.
  Tokens decode(std::span<const std::string> pieces) const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static BpeModel load(std::istream& in);
  static BpeModel load_file(const std::string& path);

 private:
  void segment(std::string_view word, Tokens& out) const;
  int rank_of(const std::string& left, const std::string& right) const;

  std::vector<MergeRule> merges_;
  std::string marker_;
  std::unordered_map<std::string, int> ranks_;
};

// Accumulates word frequencies, then learns merges greedily: the most
// frequent adjacent symbol pair first, ties broken by the lexicographically
// smallest (left, right). Learning stops early once no word has two
// symbols left.
class BpeLearner {
 public:
  void add(const Document& doc);
  void add_tokens(std::span<const std::string> tokens);
  void add_word(const std::string& word, std::uint64_t count = 1);

  // Throws Error(kEmptyModelRequest) for num_merges == 0 and
  // Error(kEmptyCorpus) when nothing was added.
  BpeModel learn(std::size_t num_merges,
                 std::string marker = std::string(kDefaultBpeMarker)) const;

 private:
  std::map<std::string, std::uint64_t> words_;
};

BpeModel bpe_learn(std::span<const Document> corpus, std::size_t num_merges,
                   std::string marker = std::string(kDefaultBpeMarker));

}  // namespace sumforge

#endif  // SUMFORGE_BPE_H_
