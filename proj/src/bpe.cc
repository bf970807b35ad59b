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

#include "sumforge/bpe.h"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "sumforge/error.h"
#include "sumforge/text.h"

namespace sumforge {
namespace {

constexpr std::string_view kHeaderPrefix = "#sumforge-bpe v1 marker=";

std::string pair_key(std::string_view left, std::string_view right) {
  std::string key;
  key.reserve(left.size() + right.size() + 1);
  key.append(left);
  key.push_back(' ');
  key.append(right);
  return key;
}

std::uint64_t symbol_pair(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

int pair_left(std::uint64_t key) { return static_cast<int>(key >> 32); }
int pair_right(std::uint64_t key) {
  return static_cast<int>(key & 0xffffffffULL);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

BpeModel::BpeModel(std::vector<MergeRule> merges, std::string marker)
    : merges_(std::move(merges)), marker_(std::move(marker)) {
  if (marker_.empty()) {
    throw Error(ErrorCode::kMalformedModel, "empty continuation marker");
  }
  ranks_.reserve(merges_.size());
  for (std::size_t i = 0; i < merges_.size(); ++i) {
    const MergeRule& rule = merges_[i];
    if (rule.left.empty() || rule.right.empty()) {
      throw Error(ErrorCode::kMalformedModel,
                  "empty symbol in merge " + std::to_string(i));
    }
    if (!ranks_.emplace(pair_key(rule.left, rule.right), static_cast<int>(i))
             .second) {
      throw Error(ErrorCode::kMalformedModel,
                  "duplicate merge '" + rule.left + " " + rule.right + "'");
    }
  }
}

int BpeModel::rank_of(const std::string& left, const std::string& right) const {
  const auto it = ranks_.find(pair_key(left, right));
  return it == ranks_.end() ? -1 : it->second;
}

void BpeModel::segment(std::string_view word, Tokens& out) const {
  Tokens symbols = text::code_points(word);
  // Picking the lowest rank above the last applied one is equivalent to
  // sweeping the merge list in order, skipping rules with no occurrence.
  int last_rank = -1;
  while (symbols.size() > 1) {
    int best = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const int r = rank_of(symbols[i], symbols[i + 1]);
      if (r > last_rank && r < best) best = r;
    }
    if (best == std::numeric_limits<int>::max()) break;
    const MergeRule& rule = merges_[static_cast<std::size_t>(best)];
    Tokens merged;
    merged.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i] == rule.left &&
          symbols[i + 1] == rule.right) {
        merged.push_back(symbols[i] + symbols[i + 1]);
        ++i;
      } else {
        merged.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(merged);
    last_rank = best;
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i + 1 < symbols.size()) symbols[i] += marker_;
    out.push_back(std::move(symbols[i]));
  }
}

Tokens BpeModel::apply(std::span<const std::string> tokens) const {
  Tokens out;
  out.reserve(tokens.size() * 2);
  for (const std::string& token : tokens) segment(token, out);
  return out;
}

Tokens BpeModel::decode(std::span<const std::string> pieces) const {
  Tokens out;
  std::string pending;
  bool open = false;
  for (const std::string& piece : pieces) {
    if (ends_with(piece, marker_)) {
      pending.append(piece, 0, piece.size() - marker_.size());
      open = true;
    } else {
      pending.append(piece);
      out.push_back(std::move(pending));
      pending.clear();
      open = false;
    }
  }
  if (open) {
    throw Error(ErrorCode::kDanglingMarker,
                "final piece carries continuation marker '" + marker_ + "'");
  }
  return out;
}

void BpeModel::save(std::ostream& out) const {
  out << kHeaderPrefix << marker_ << '\n';
  for (const MergeRule& rule : merges_) {
    out << rule.left << ' ' << rule.right << '\n';
  }
}

void BpeModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  save(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

BpeModel BpeModel::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeaderPrefix, 0) != 0) {
    throw Error(ErrorCode::kMalformedModel, "missing '#sumforge-bpe v1' header");
  }
  std::string marker = line.substr(kHeaderPrefix.size());
  std::vector<MergeRule> merges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw Error(ErrorCode::kMalformedModel,
                  "bad merge at line " + std::to_string(line_no));
    }
    merges.push_back({line.substr(0, space), line.substr(space + 1)});
  }
  return BpeModel(std::move(merges), std::move(marker));
}

BpeModel BpeModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  return load(in);
}

void BpeLearner::add(const Document& doc) {
  for (const Tokens& sentence : doc.sentences) add_tokens(sentence);
}

void BpeLearner::add_tokens(std::span<const std::string> tokens) {
  for (const std::string& t : tokens) add_word(t);
}

void BpeLearner::add_word(const std::string& word, std::uint64_t count) {
  if (!word.empty() && count > 0) words_[word] += count;
}

BpeModel BpeLearner::learn(std::size_t num_merges, std::string marker) const {
  if (num_merges == 0) {
    throw Error(ErrorCode::kEmptyModelRequest, "num_merges must be >= 1");
  }
  if (words_.empty()) throw Error(ErrorCode::kEmptyCorpus, "empty corpus");

  std::vector<std::string> symbol_text;
  std::unordered_map<std::string, int> symbol_ids;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = symbol_ids.emplace(s, static_cast<int>(symbol_text.size()));
    if (inserted) symbol_text.push_back(s);
    return it->second;
  };

  struct Word {
    std::vector<int> symbols;
    std::int64_t count;
  };
  std::vector<Word> words;
  words.reserve(words_.size());
  for (const auto& [w, c] : words_) {
    Word word{{}, static_cast<std::int64_t>(c)};
    for (const std::string& cp : text::code_points(w)) {
      word.symbols.push_back(intern(cp));
    }
    words.push_back(std::move(word));
  }

  std::unordered_map<std::uint64_t, std::int64_t> pair_counts;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> pair_words;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const auto& s = words[wi].symbols;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const std::uint64_t key = symbol_pair(s[i], s[i + 1]);
      pair_counts[key] += words[wi].count;
      pair_words[key].push_back(wi);
    }
  }

  // Lazy max-heap: stale entries are skipped when their count no longer
  // matches pair_counts.
  struct Entry {
    std::int64_t count;
    std::uint64_t key;
  };
  auto worse = [&](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count < b.count;
    const std::string& al = symbol_text[pair_left(a.key)];
    const std::string& bl = symbol_text[pair_left(b.key)];
    if (al != bl) return al > bl;
    return symbol_text[pair_right(a.key)] > symbol_text[pair_right(b.key)];
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (const auto& [key, count] : pair_counts) heap.push({count, key});

  std::vector<MergeRule> merges;
  std::vector<std::size_t> word_stamp(words.size(), 0);
  while (merges.size() < num_merges && !heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const auto it = pair_counts.find(top.key);
    if (it == pair_counts.end() || it->second != top.count) continue;
    if (top.count <= 0) break;

    const int a = pair_left(top.key);
    const int b = pair_right(top.key);
    merges.push_back({symbol_text[a], symbol_text[b]});
    const int merged = intern(symbol_text[a] + symbol_text[b]);
    const std::size_t stamp = merges.size();

    std::set<std::uint64_t> touched;
    const std::vector<std::size_t> candidates = std::move(pair_words[top.key]);
    pair_words.erase(top.key);
    for (std::size_t wi : candidates) {
      if (word_stamp[wi] == stamp) continue;
      word_stamp[wi] = stamp;
      Word& word = words[wi];
      auto& s = word.symbols;
      bool present = false;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == a && s[i + 1] == b) {
          present = true;
          break;
        }
      }
      if (!present) continue;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const std::uint64_t key = symbol_pair(s[i], s[i + 1]);
        pair_counts[key] -= word.count;
        touched.insert(key);
      }
      std::vector<int> next;
      next.reserve(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i + 1 < s.size() && s[i] == a && s[i + 1] == b) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(s[i]);
        }
      }
      s = std::move(next);
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const std::uint64_t key = symbol_pair(s[i], s[i + 1]);
        pair_counts[key] += word.count;
        pair_words[key].push_back(wi);
        touched.insert(key);
      }
    }
    for (std::uint64_t key : touched) {
      auto pc = pair_counts.find(key);
      if (pc->second > 0) {
        heap.push({pc->second, key});
      } else {
        pair_counts.erase(pc);
      }
    }
  }
  return BpeModel(std::move(merges), std::move(marker));
}

BpeModel bpe_learn(std::span<const Document> corpus, std::size_t num_merges,
                   std::string marker) {
  BpeLearner learner;
  for (const Document& doc : corpus) learner.add(doc);
  return learner.learn(num_merges, std::move(marker));
}

}  // namespace sumforge
