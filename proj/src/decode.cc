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

#include "sumforge/decode.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sumforge/error.h"
#include "sumforge/parallel.h"

namespace sumforge {
namespace {

struct Hyp {
  std::vector<int> ids;
  double score = 0.0;
};

// Expansion of live hypothesis `parent` by `token`; token == kEos ends it.
struct Candidate {
  std::size_t parent;
  int token;
  double score;
};

double normalized(double score, std::size_t length, double alpha) {
  if (alpha == 0.0) return score;
  return score / std::pow(static_cast<double>(std::max<std::size_t>(length, 1)),
                          alpha);
}

// Lexicographic order of the candidate's resulting id sequence.
bool sequence_less(const std::vector<Hyp>& live, const Candidate& a,
                   const Candidate& b) {
  const auto& pa = live[a.parent].ids;
  const auto& pb = live[b.parent].ids;
  const std::size_t la = pa.size() + (a.token == Vocabulary::kEos ? 0 : 1);
  const std::size_t lb = pb.size() + (b.token == Vocabulary::kEos ? 0 : 1);
  for (std::size_t i = 0; i < std::min(la, lb); ++i) {
    const int x = i < pa.size() ? pa[i] : a.token;
    const int y = i < pb.size() ? pb[i] : b.token;
    if (x != y) return x < y;
  }
  return la < lb;
}

bool better_result(const Hyp& a, double na, const Hyp& b, double nb) {
  if (na != nb) return na > nb;
  return a.ids < b.ids;
}

}  // namespace

Vocabulary::Vocabulary(const std::vector<std::string>& tokens) {
  tokens_.emplace_back(kEosToken);
  tokens_.emplace_back(kUnkToken);
  ids_.emplace(kEosToken, kEos);
  ids_.emplace(kUnkToken, kUnk);
  for (const std::string& t : tokens) {
    if (ids_.emplace(t, static_cast<int>(tokens_.size())).second) {
      tokens_.push_back(t);
    }
  }
}

int Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const std::string& t : tokens) out.push_back(id(t));
  return out;
}

Tokens Vocabulary::decode(std::span<const int> ids) const {
  Tokens out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

void DecodeConfig::validate() const {
  if (beam_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "beam_size must be >= 1");
  }
  if (max_len == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_len must be >= 1");
  }
  if (!(length_penalty_alpha >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "length penalty alpha must be >= 0");
  }
}

bool creates_repeated_trigram(std::span<const int> prefix, int next) {
  const std::size_t n = prefix.size();
  if (n < 2) return false;
  const int a = prefix[n - 2];
  const int b = prefix[n - 1];
  for (std::size_t i = 0; i + 2 < n; ++i) {
    if (prefix[i] == a && prefix[i + 1] == b && prefix[i + 2] == next) {
      return true;
    }
  }
  return false;
}

bool has_repeated_trigram(std::span<const std::string> tokens) {
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j + 2 < tokens.size(); ++j) {
      if (tokens[i] == tokens[j] && tokens[i + 1] == tokens[j + 1] &&
          tokens[i + 2] == tokens[j + 2]) {
        return true;
      }
    }
  }
  return false;
}

DecodeResult beam_search_ids(const Scorer& scorer, std::span<const int> source,
                             const DecodeConfig& cfg) {
  cfg.validate();
  const std::size_t vocab_size = scorer.vocab().size();
  const double alpha = cfg.length_penalty_alpha;

  std::vector<Hyp> live(1);
  std::vector<Hyp> finished;
  std::vector<Hyp> stranded;  // live hypotheses with no possible continuation
  std::vector<double> lp(vocab_size);
  std::vector<Candidate> candidates;

  while (!live.empty()) {
    candidates.clear();
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Hyp& hyp = live[h];
      std::fill(lp.begin(), lp.end(),
                -std::numeric_limits<double>::infinity());
      scorer.log_probs(source, hyp.ids, lp);
      const std::size_t before = candidates.size();
      if (hyp.ids.size() >= cfg.max_len) {
        if (std::isfinite(lp[Vocabulary::kEos])) {
          candidates.push_back({h, Vocabulary::kEos,
                                hyp.score + lp[Vocabulary::kEos]});
        }
      } else {
        for (std::size_t v = 0; v < vocab_size; ++v) {
          if (!std::isfinite(lp[v])) continue;
          const int token = static_cast<int>(v);
          if (token != Vocabulary::kEos && cfg.block_trigrams &&
              creates_repeated_trigram(hyp.ids, token)) {
            continue;
          }
          candidates.push_back({h, token, hyp.score + lp[v]});
        }
      }
      if (candidates.size() == before) stranded.push_back(hyp);
    }
    if (candidates.empty()) break;

    auto order = [&](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return sequence_less(live, a, b);
    };
    const std::size_t keep = std::min(cfg.beam_size, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(), order);

    std::vector<Hyp> next_live;
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = candidates[i];
      Hyp hyp{live[c.parent].ids, c.score};
      if (c.token == Vocabulary::kEos) {
        finished.push_back(std::move(hyp));
      } else {
        hyp.ids.push_back(c.token);
        next_live.push_back(std::move(hyp));
      }
    }
    live = std::move(next_live);

    // Log-probabilities are <= 0, so without length normalization no live
    // hypothesis can overtake a finished one with a higher score.
    if (alpha == 0.0 && !finished.empty() && !live.empty()) {
      double best_finished = -std::numeric_limits<double>::infinity();
      for (const Hyp& f : finished) best_finished = std::max(best_finished, f.score);
      double best_live = -std::numeric_limits<double>::infinity();
      for (const Hyp& l : live) best_live = std::max(best_live, l.score);
      if (best_finished >= best_live) break;
    }
  }

  DecodeResult result;
  const std::vector<Hyp>* pool = &finished;
  if (finished.empty()) {
    result.finished = false;
    stranded.insert(stranded.end(), live.begin(), live.end());
    pool = &stranded;
  }
  const Hyp* best = nullptr;
  double best_norm = 0.0;
  for (const Hyp& h : *pool) {
    const double n = normalized(h.score, h.ids.size(), alpha);
    if (best == nullptr || better_result(h, n, *best, best_norm)) {
      best = &h;
      best_norm = n;
    }
  }
  if (best != nullptr) {
    result.ids = best->ids;
    result.score = best->score;
    result.normalized_score = best_norm;
  } else {
    result.score = -std::numeric_limits<double>::infinity();
    result.normalized_score = result.score;
  }
  result.tokens = scorer.vocab().decode(result.ids);
  return result;
}

DecodeResult beam_search(const Scorer& scorer,
                         std::span<const std::string> source,
                         const DecodeConfig& cfg) {
  const std::vector<int> ids = scorer.vocab().encode(source);
  return beam_search_ids(scorer, ids, cfg);
}

std::vector<DecodeResult> batch_decode(const Scorer& scorer,
                                       std::span<const Tokens> sources,
                                       const DecodeConfig& cfg,
                                       std::size_t jobs) {
  cfg.validate();
  std::vector<DecodeResult> results(sources.size());
  parallel_for(sources.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = beam_search(scorer, sources[i], cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "item " + std::to_string(i) + ": " + e.what());
    }
  });
  return results;
}

}  // namespace sumforge
