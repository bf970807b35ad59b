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

#include <cstdlib>
#include <filesystem>

#include "sumforge/backends.h"
#include "sumforge/corpus.h"
#include "sumforge/error.h"

using namespace sumforge;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

const std::string kReport =
    "Le maire ouvre la séance. Le budget est présenté. Le vote a lieu. "
    "La séance est levée.";

}  // namespace

TEST_CASE("spec parsing") {
  const BackendSpec s = BackendSpec::parse("lead_k:k=2");
  CHECK(s.kind == BackendKind::kLeadK);
  CHECK(s.params.at("k") == "2");
  const BackendSpec e = BackendSpec::parse("external:cwd=/tmp,cmd=tr a,b x {in} {out}");
  CHECK(e.params.at("cmd") == "tr a,b x {in} {out}");
  CHECK(e.params.at("cwd") == "/tmp");
  CHECK(BackendSpec::parse("noisy_clone:seed=7").seed == 7);
  CHECK(code_of([] { BackendSpec::parse("bogus"); }) == ErrorCode::kConfig);
}

TEST_CASE("identity and lead_k") {
  CHECK(summarize(BackendSpec::parse("identity"), kReport) == kReport);
  CHECK(summarize(BackendSpec::parse("lead_k:k=2"), kReport) ==
        "Le maire ouvre la séance . Le budget est présenté .");
  CHECK(code_of([] { make_backend(BackendSpec::parse("lead_k:k=0")); }) ==
        ErrorCode::kConfig);
  CHECK(code_of([] { make_backend(BackendSpec::parse("lead_k:q=1")); }) ==
        ErrorCode::kConfig);
}

TEST_CASE("noisy_clone is keyed by item id") {
  auto b = make_backend(BackendSpec::parse("noisy_clone"));
  const std::vector<BackendItem> items{{0, kReport}, {1, kReport}, {0, kReport}};
  const auto out = b->summarize_batch(items);
  CHECK(out[0] == out[2]);
  CHECK(out[0].find("<mask>") != std::string::npos);
  auto par = make_backend(BackendSpec::parse("noisy_clone"), {}, 4);
  CHECK(par->summarize_batch(items) == out);
}

TEST_CASE("ngram_lm trains from a file") {
  const fs::path dir = fs::temp_directory_path() / "sumforge_backend_lm";
  fs::create_directories(dir);
  write_jsonl(std::vector<AlignedPair>{{"x", kReport, ""},
                                       {"y", "Le conseil vote le budget.", ""}},
              (dir / "train.jsonl").string());
  auto b = make_backend(
      BackendSpec::parse("ngram_lm:train=" + (dir / "train.jsonl").string()));
  const std::string out = b->summarize("Le budget est voté.");
  CHECK_FALSE(out.empty());
  CHECK(code_of([] { make_backend(BackendSpec::parse("ngram_lm")); }) ==
        ErrorCode::kConfig);
}

TEST_CASE("external command protocol") {
  auto b = make_backend(
      BackendSpec::parse("external:cmd=sed 's/\"src\"/\"pred\"/' {in} > {out}"));
  const std::vector<BackendItem> items{{4, "alpha"}, {9, "beta, gamma"}};
  CHECK(b->summarize_batch(items) == std::vector<std::string>{"alpha", "beta, gamma"});
}

TEST_CASE("external failures") {
  auto fail = make_backend(BackendSpec::parse("external:cmd=exit 3 {in} {out}"));
  const std::vector<BackendItem> items{{0, "a"}};
  CHECK(code_of([&] { fail->summarize_batch(items); }) == ErrorCode::kBackendFailure);
  auto missing = make_backend(BackendSpec::parse("external:cmd=head -c 0 {in} > {out}"));
  CHECK(code_of([&] { missing->summarize_batch(items); }) ==
        ErrorCode::kBackendFailure);
  CHECK(code_of([] { make_backend(BackendSpec::parse("external:cmd=true")); }) ==
        ErrorCode::kConfig);
}

TEST_CASE("external timeout") {
  setenv("SUMFORGE_BACKEND_TIMEOUT_SECS", "0.5", 1);
  auto slow = make_backend(BackendSpec::parse("external:cmd=sleep 5; cp {in} {out}"));
  const std::vector<BackendItem> items{{0, "a"}};
  CHECK(code_of([&] { slow->summarize_batch(items); }) == ErrorCode::kBackendFailure);
  unsetenv("SUMFORGE_BACKEND_TIMEOUT_SECS");
}
