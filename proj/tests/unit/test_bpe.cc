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

#include <sstream>

#include "sumforge/bpe.h"
#include "sumforge/error.h"
#include "sumforge/tokenize.h"

using sumforge::BpeLearner;
using sumforge::BpeModel;
using sumforge::ErrorCode;
using sumforge::Tokens;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const sumforge::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("learn picks the most frequent pair, ties lexicographic") {
  BpeLearner learner;
  learner.add_word("abab", 2);
  learner.add_word("cd", 2);
  const BpeModel m = learner.learn(2);
  REQUIRE(m.merges().size() == 2);
  // (a,b) occurs 4 times.
  CHECK(m.merges()[0].left == "a");
  CHECK(m.merges()[0].right == "b");
  // then (ab,ab) 2 and (c,d) 2: "ab" < "c".
  CHECK(m.merges()[1].left == "ab");
  CHECK(m.merges()[1].right == "ab");
}

TEST_CASE("apply marks non-final pieces") {
  const BpeModel m(std::vector<sumforge::MergeRule>{{"l", "o"}, {"lo", "w"}});
  CHECK(m.apply(Tokens{"lower", "low"}) ==
        Tokens{"low@@", "e@@", "r", "low"});
  CHECK(m.decode(Tokens{"low@@", "e@@", "r", "low"}) == Tokens{"lower", "low"});
}

TEST_CASE("decode rejects a dangling marker") {
  const BpeModel m(std::vector<sumforge::MergeRule>{{"a", "b"}});
  CHECK(code_of([&] { m.decode(Tokens{"ab@@"}); }) == ErrorCode::kDanglingMarker);
}

TEST_CASE("save and load round trip") {
  BpeLearner learner;
  learner.add(sumforge::parse_document("le conseil municipal se réunit le lundi."));
  const BpeModel m = learner.learn(10);
  std::stringstream ss;
  m.save(ss);
  CHECK(ss.str().rfind("#sumforge-bpe v1 marker=@@\n", 0) == 0);
  const BpeModel back = BpeModel::load(ss);
  CHECK(back.merges() == m.merges());
}

TEST_CASE("learn stops when no pairs remain") {
  BpeLearner learner;
  learner.add_word("ab");
  CHECK(learner.learn(100).merges().size() == 1);
}

TEST_CASE("errors") {
  BpeLearner empty;
  CHECK(code_of([&] { empty.learn(5); }) == ErrorCode::kEmptyCorpus);
  BpeLearner one;
  one.add_word("xy");
  CHECK(code_of([&] { one.learn(0); }) == ErrorCode::kEmptyModelRequest);
  std::istringstream bad("#sumforge-bpe v1 marker=@@\nonlyone\n");
  CHECK(code_of([&] { BpeModel::load(bad); }) == ErrorCode::kMalformedModel);
}

TEST_CASE("round trip on words with the marker inside") {
  BpeLearner learner;
  learner.add_word("a@@b", 3);
  learner.add_word("éé", 3);
  const BpeModel m = learner.learn(20);
  const Tokens words{"a@@b", "éé", "zzz", "@@x", "a@"};
  CHECK(m.decode(m.apply(words)) == words);
  // A word ending in the marker is indistinguishable from a split piece.
  if (m.apply(Tokens{"b@@"}).back().size() >= 2 &&
      m.apply(Tokens{"b@@"}).back().ends_with("@@")) {
    CHECK(code_of([&] { m.decode(m.apply(Tokens{"b@@"})); }) ==
          ErrorCode::kDanglingMarker);
  }
}
