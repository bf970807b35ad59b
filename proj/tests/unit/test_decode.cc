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

#include <doctest.h>

#include <cmath>

#include "sumforge/decode.h"
#include "sumforge/error.h"
#include "sumforge/ngram.h"

using namespace sumforge;

namespace {

// Fixed table: next-token log-probs depend only on the last token.
class BigramScorer : public Scorer {
 public:
  BigramScorer(Vocabulary v, std::vector<std::vector<double>> probs)
      : vocab_(std::move(v)), probs_(std::move(probs)) {}
  const Vocabulary& vocab() const override { return vocab_; }
  void log_probs(std::span<const int>, std::span<const int> prefix,
                 std::vector<double>& out) const override {
    const std::size_t row = prefix.empty() ? 0 : static_cast<std::size_t>(prefix.back());
    out.resize(vocab_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(probs_[row][i]);
  }

 private:
  Vocabulary vocab_;
  std::vector<std::vector<double>> probs_;
};

// Always prefers a -> b -> a -> b ...; end-of-sequence is unlikely.
class LoopScorer : public Scorer {
 public:
  LoopScorer() : vocab_({"a", "b"}) {}
  const Vocabulary& vocab() const override { return vocab_; }
  void log_probs(std::span<const int>, std::span<const int> prefix,
                 std::vector<double>& out) const override {
    const int a = vocab_.id("a"), b = vocab_.id("b");
    const int want = (!prefix.empty() && prefix.back() == a) ? b : a;
    out.assign(vocab_.size(), std::log(1e-6));
    out[static_cast<std::size_t>(want)] = std::log(0.9);
    out[Vocabulary::kEos] = std::log(prefix.size() >= 12 ? 0.5 : 1e-9);
  }

 private:
  Vocabulary vocab_;
};

}  // namespace

TEST_CASE("vocabulary reserves eos and unk") {
  const Vocabulary v({"x", "</s>", "y", "x"});
  CHECK(v.size() == 4);
  CHECK(v.id("</s>") == Vocabulary::kEos);
  CHECK(v.id("zzz") == Vocabulary::kUnk);
  CHECK(v.decode(v.encode(Tokens{"y", "x"})) == Tokens{"y", "x"});
}

TEST_CASE("trigram predicates") {
  const std::vector<int> prefix{5, 6, 7, 5, 6};
  CHECK(creates_repeated_trigram(prefix, 7));
  CHECK_FALSE(creates_repeated_trigram(prefix, 8));
  CHECK(has_repeated_trigram(Tokens{"a", "b", "c", "a", "b", "c"}));
  CHECK_FALSE(has_repeated_trigram(Tokens{"a", "b", "a", "b"}));
}

TEST_CASE("beam search finds the best sequence") {
  // ids: 0 </s>, 1 <unk>, 2 x, 3 y.
  const Vocabulary v({"x", "y"});
  const BigramScorer s(v, {{0.1, 0.0001, 0.6, 0.2999},
                           {0.25, 0.25, 0.25, 0.25},
                           {0.1, 0.0001, 0.0999, 0.8},
                           {0.9, 0.0001, 0.05, 0.0499}});
  DecodeConfig cfg;
  cfg.beam_size = 3;
  const DecodeResult r = beam_search(s, Tokens{}, cfg);
  CHECK(r.finished);
  CHECK(r.tokens == Tokens{"x", "y"});
  CHECK(r.score == doctest::Approx(std::log(0.6) + std::log(0.8) + std::log(0.9)));
}

TEST_CASE("blocking removes loops, disabling shows them") {
  const LoopScorer s;
  DecodeConfig cfg;
  cfg.max_len = 20;
  cfg.block_trigrams = false;
  const DecodeResult loose = beam_search(s, Tokens{}, cfg);
  CHECK(has_repeated_trigram(loose.tokens));
  cfg.block_trigrams = true;
  const DecodeResult tight = beam_search(s, Tokens{}, cfg);
  CHECK_FALSE(has_repeated_trigram(tight.tokens));
}

TEST_CASE("max_len forces termination") {
  const LoopScorer s;
  DecodeConfig cfg;
  cfg.max_len = 4;
  cfg.block_trigrams = false;
  const DecodeResult r = beam_search(s, Tokens{}, cfg);
  CHECK(r.tokens.size() <= 4);
}

TEST_CASE("decode config validation") {
  DecodeConfig cfg;
  cfg.beam_size = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.beam_size = 1;
  cfg.max_len = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("ngram lm probabilities normalize") {
  const std::vector<Tokens> seqs{{"le", "maire", "parle"}, {"le", "vote"}};
  const NgramLm lm = NgramLm::train(seqs, 2, 0.1);
  std::vector<double> p;
  const std::vector<int> hist{lm.vocab().id("le")};
  lm.distribution(hist, p);
  double sum = 0;
  for (double x : p) sum += x;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(p[lm.vocab().id("maire")] > p[lm.vocab().id("parle")]);
  CHECK_THROWS_AS(NgramLm::train(seqs, 0, 0.1), Error);
  CHECK_THROWS_AS(NgramLm::train(std::vector<Tokens>{{}}, 2, 0.1), Error);
}

TEST_CASE("batch decode preserves order and matches serial") {
  const std::vector<Tokens> seqs{{"le", "maire", "parle", "."},
                                 {"le", "vote", "est", "clos", "."}};
  const NgramLm lm = NgramLm::train(seqs, 3, 0.01);
  const NgramScorer scorer(lm, 0.5);
  DecodeConfig cfg;
  cfg.max_len = 30;
  const std::vector<Tokens> sources{seqs[1], seqs[0], seqs[1]};
  const auto serial = batch_decode(scorer, sources, cfg, 1);
  const auto par = batch_decode(scorer, sources, cfg, 3);
  REQUIRE(serial.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(serial[i].tokens == par[i].tokens);
  CHECK(serial[0].tokens == serial[2].tokens);
}
