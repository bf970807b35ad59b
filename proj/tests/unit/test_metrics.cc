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

#include "sumforge/error.h"
#include "sumforge/metrics.h"

using namespace sumforge;

TEST_CASE("rouge_n clipped counts") {
  const Tokens pred{"the", "the", "the", "cat"};
  const Tokens ref{"the", "cat", "sat"};
  const RougeScore r = rouge_n(pred, ref, 1);
  CHECK(r.precision == doctest::Approx(2.0 / 4));
  CHECK(r.recall == doctest::Approx(2.0 / 3));
  CHECK(r.f1 == doctest::Approx(2 * 0.5 * (2.0 / 3) / (0.5 + 2.0 / 3)));
  const RougeScore r2 = rouge_n(pred, ref, 2);
  CHECK(r2.precision == doctest::Approx(1.0 / 3));
  CHECK(r2.recall == doctest::Approx(1.0 / 2));
}

TEST_CASE("rouge on empty and short inputs") {
  const Tokens a{"x"};
  CHECK(rouge_n(a, a, 2).f1 == 0.0);
  CHECK(rouge_n(Tokens{}, a, 1).f1 == 0.0);
  CHECK_THROWS_AS(rouge_n(a, a, 0), Error);
}

TEST_CASE("lcs and rouge_l") {
  const Tokens a{"a", "b", "c", "d", "e"};
  const Tokens b{"a", "c", "e", "f"};
  CHECK(lcs_length(a, b) == 3);
  const RougeScore l = rouge_l(a, b);
  CHECK(l.precision == doctest::Approx(3.0 / 5));
  CHECK(l.recall == doctest::Approx(3.0 / 4));
}

TEST_CASE("copy percent") {
  const Tokens pred{"a", "b", "c", "d"};
  const Tokens src{"a", "b", "x", "y", "z", "w", "v", "u"};
  CHECK(copy_percent(pred, src, CopyMetric::kPrecision) == doctest::Approx(50.0));
  CHECK(copy_percent(pred, src, CopyMetric::kF1) ==
        doctest::Approx(100.0 * 2 * 0.5 * 0.25 / 0.75));
  CHECK(parse_copy_metric("precision") == CopyMetric::kPrecision);
  CHECK_THROWS_AS(parse_copy_metric("recall"), Error);
}

TEST_CASE("identity evaluation is 100") {
  const std::vector<std::string> t{"Le maire parle.", "Le vote est clos."};
  const EvalReport r = evaluate_texts(t, t, t);
  CHECK(format_report_row(r) == "100.00 / 100.00 / 100.00\t100.00");
  CHECK(report_json(r) ==
        "{\"r1\": 100.00, \"r2\": 100.00, \"rl\": 100.00, \"copy_pct\": 100.00, "
        "\"n\": 2}");
}

TEST_CASE("evaluation errors") {
  const std::vector<std::string> a{"x"}, b{"x", "y"};
  try {
    evaluate_texts(a, b, {});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kLengthMismatch);
  }
  CHECK_THROWS_AS(evaluate_corpus({}), Error);
  const EvalReport no_src = evaluate_texts(a, a, {});
  CHECK_FALSE(no_src.copy_pct.has_value());
  CHECK(report_json(no_src).find("\"copy_pct\": null") != std::string::npos);
}

TEST_CASE("row rendering") {
  CHECK(format_rouge_row(52.31, 34.0, 49.7) == "52.31 / 34.00 / 49.70");
  CHECK(format_percent(79.36) == "79.36");
  CHECK(format_percent(0.005) == "0.01");
}

TEST_CASE("parallel evaluation matches serial") {
  std::vector<std::string> p, r;
  for (int i = 0; i < 40; ++i) {
    p.push_back("mot" + std::to_string(i % 7) + " et mot" + std::to_string(i % 3));
    r.push_back("mot" + std::to_string(i % 5) + " et mot" + std::to_string(i % 3));
  }
  const EvalReport a = evaluate_texts(p, r, r, CopyMetric::kF1, 1);
  const EvalReport b = evaluate_texts(p, r, r, CopyMetric::kF1, 4);
  CHECK(a.r1.f1 == b.r1.f1);
  CHECK(a.rl.f1 == b.rl.f1);
  CHECK(*a.copy_pct == *b.copy_pct);
}
