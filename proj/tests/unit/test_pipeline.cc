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

#include <filesystem>
#include <fstream>

#include "sumforge/error.h"
#include "sumforge/io.h"
#include "sumforge/pipeline.h"
#include "sumforge/toy.h"

using namespace sumforge;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sumforge_pipeline_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

PipelineConfig toy_config(const fs::path& dir, std::size_t pairs) {
  const ToyCorpus toy = gen_toy_corpus(pairs, 3, (dir / "toy").string());
  PipelineConfig cfg;
  cfg.workdir = (dir / "work").string();
  cfg.manual = toy.manual;
  cfg.automatic = toy.automatic;
  cfg.reports = toy.reports;
  cfg.valid = toy.valid;
  cfg.eval.pairs = toy.valid;
  cfg.checkpoint_every = 7;
  return cfg;
}

const std::vector<CandidateModel> kTable{{"Baseline", 33.83, 74.25},
                                         {"SelfSup", 37.94, 78.61},
                                         {"Backsum", 39.17, 86.96},
                                         {"Both", 40.23, 88.03}};

}  // namespace

TEST_CASE("selection rule") {
  CHECK(select_backward_model(kTable, 55.38, kNoCopyCap).model.name == "Both");
  CHECK(select_backward_model(kTable, 80.0, 0.0).model.name == "SelfSup");
  const Selection none = select_backward_model(kTable, 55.38, 0.0);
  CHECK(none.degraded);
  CHECK(none.model.name == "Baseline");
  CHECK(select_backward_model(std::span(kTable).first(1), 0, 0).model.name ==
        "Baseline");
  const std::vector<CandidateModel> tie{{"b", 30, 50}, {"a", 30, 50}};
  CHECK(select_backward_model(tie, 60, 0).model.name == "a");
  CHECK_THROWS_AS(select_backward_model({}, 50, 0), Error);
  CHECK_THROWS_AS(select_backward_model(kTable, 50, -1), Error);
}

TEST_CASE("selection never returns a dominated qualifying candidate") {
  const std::vector<CandidateModel> c{{"x", 30, 40}, {"y", 35, 38}, {"z", 20, 30}};
  const Selection s = select_backward_model(c, 45, 0);
  for (const CandidateModel& o : c) {
    CHECK_FALSE((o.valid_rouge1_f > s.model.valid_rouge1_f &&
                 o.valid_copy_pct < s.model.valid_copy_pct));
  }
}

TEST_CASE("backward prep swaps and counts") {
  const fs::path dir = scratch("backward");
  PipelineConfig cfg = toy_config(dir, 5);
  const StageResult r = run_backward_prep(cfg);
  CHECK(r.count == 5 + 15);
  const auto out = read_jsonl(r.artifacts[0]);
  const auto manual = read_jsonl(cfg.manual);
  CHECK(out[0].src == manual[0].tgt);
  CHECK(out[0].origin == "manual-rev");
}

TEST_CASE("selfsup prep") {
  const fs::path dir = scratch("selfsup");
  PipelineConfig cfg = toy_config(dir, 4);
  const StageResult r = run_selfsup_prep(cfg);
  CHECK(r.count == 20);
  const auto pairs = read_jsonl(r.artifacts[0]);
  for (const AlignedPair& p : pairs) {
    CHECK(p.origin == "selfsup");
    CHECK(p.tgt.find("<mask>") == std::string::npos);
  }
  const std::string first = read_file(r.artifacts[0]);
  cfg.jobs = 3;
  run_selfsup_prep(cfg);
  CHECK(read_file(r.artifacts[0]) == first);
}

TEST_CASE("synthesis identity, conservation and resume") {
  const fs::path dir = scratch("synth");
  PipelineConfig cfg = toy_config(dir, 6);  // 30 reports
  cfg.backend = BackendSpec::parse("identity");
  const SynthesisResult full = run_synthesis(cfg);
  CHECK(full.complete);
  const auto pairs = read_jsonl(full.stage.artifacts[0]);
  REQUIRE(pairs.size() == 30);
  for (const AlignedPair& p : pairs) CHECK(p.src == p.tgt);
  const std::string reference = read_file(full.stage.artifacts[0]);

  for (std::size_t stop : {std::size_t{1}, std::size_t{7}, std::size_t{13}}) {
    fs::remove_all(cfg.workdir);
    SynthesisOptions opts;
    opts.stop_after = stop;
    const SynthesisResult part = run_synthesis(cfg, opts);
    CHECK_FALSE(part.complete);
    const SynthesisResult rest = run_synthesis(cfg);
    CHECK(rest.resumed_from == stop);
    CHECK(rest.complete);
    CHECK(read_file(rest.stage.artifacts[0]) == reference);
  }
}

TEST_CASE("synthesis discards unacknowledged output") {
  const fs::path dir = scratch("synth_tail");
  PipelineConfig cfg = toy_config(dir, 4);
  cfg.backend = BackendSpec::parse("noisy_clone");
  const std::string reference = read_file(run_synthesis(cfg).stage.artifacts[0]);
  fs::remove_all(cfg.workdir);
  SynthesisOptions opts;
  opts.stop_after = 9;
  run_synthesis(cfg, opts);
  {
    std::ofstream junk(fs::path(cfg.workdir) / "back.jsonl.partial", std::ios::app);
    junk << "{\"half\": tru";
  }
  CHECK(read_file(run_synthesis(cfg).stage.artifacts[0]) == reference);
}

TEST_CASE("synthesis detects corruption") {
  const fs::path dir = scratch("synth_corrupt");
  PipelineConfig cfg = toy_config(dir, 4);
  SynthesisOptions opts;
  opts.stop_after = 8;
  run_synthesis(cfg, opts);
  const fs::path partial = fs::path(cfg.workdir) / "back.jsonl.partial";
  std::string text = read_file(partial.string());
  text[3] = text[3] == 'x' ? 'y' : 'x';
  write_file_atomic(partial.string(), text);
  try {
    run_synthesis(cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCheckpointCorrupt);
  }
  write_file_atomic((fs::path(cfg.workdir) / "synth.ckpt").string(), "garbage\n");
  CHECK_THROWS_AS(run_synthesis(cfg), Error);
}

TEST_CASE("synthesis reports the failing item") {
  const fs::path dir = scratch("synth_fail");
  PipelineConfig cfg = toy_config(dir, 2);
  cfg.backend = BackendSpec::parse(
      "external:cmd=sed 's/\"src\":\"[^\"]*\"/\"pred\":\"\"/' {in} > {out}");
  try {
    run_synthesis(cfg);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBackendFailure);
    CHECK(std::string(e.what()).find("item 0") != std::string::npos);
  }
}

TEST_CASE("forward prep and eval") {
  const fs::path dir = scratch("forward");
  PipelineConfig cfg = toy_config(dir, 4);
  CHECK_THROWS_AS(run_forward_prep(cfg), Error);  // no back.jsonl yet
  cfg.backend = BackendSpec::parse("identity");
  run_synthesis(cfg);
  const ForwardResult f = run_forward_prep(cfg);
  REQUIRE(f.datasets.size() == 3);
  CHECK(f.datasets[2].size == 20);
  CHECK(f.cycles == 2);  // max(ceil(4/2), ceil(12/7), ceil(20/100))
  CHECK(f.stage.count == 2 * 109);
  const auto bundle = load_dataset_specs(f.stage.artifacts[1]);
  CHECK(bundle[2].size == 20);

  const EvalResult e = run_eval(cfg);
  CHECK(e.report.copy_pct.has_value());
  CHECK(*e.report.copy_pct == doctest::Approx(100.0));
}

TEST_CASE("in-memory eval") {
  const std::vector<std::string> t{"le maire parle", "le vote est clos"};
  const EvalReport r = run_eval(t, t, t);
  CHECK(format_report_row(r) == "100.00 / 100.00 / 100.00\t100.00");
  const std::vector<std::string> shorter{"x"};
  CHECK_THROWS_AS(run_eval(shorter, t, {}), Error);
}

TEST_CASE("config loading") {
  const fs::path dir = scratch("config");
  {
    std::ofstream out(dir / "cfg.toml");
    out << "workdir = \"w\"\nseed = 5\n[data]\nmanual = \"m.jsonl\"\n"
           "[noise]\np = 0.2\nlambda = 2.5\npermute = false\n"
           "[weights]\nmanual = 1\nautomatic = 10\nback = 100\n"
           "[backend]\nkind = \"lead_k\"\nk = 2\n"
           "[selection]\nref_copy_pct = 55.38\n"
           "[[selection.candidate]]\nname = \"A\"\nrouge1 = 1.0\ncopy_pct = 2.0\n";
  }
  const PipelineConfig cfg = PipelineConfig::load((dir / "cfg.toml").string());
  CHECK(fs::path(cfg.workdir) == dir / "w");
  CHECK(fs::path(cfg.manual) == dir / "m.jsonl");
  CHECK(cfg.noise.infill_p == 0.2);
  CHECK(cfg.noise.seed == 5);
  CHECK_FALSE(cfg.noise.permute_sentences);
  CHECK(cfg.weight_automatic == 10);
  CHECK(cfg.backend.kind == BackendKind::kLeadK);
  CHECK(cfg.backend.params.at("k") == "2");
  CHECK(cfg.selection.candidates.size() == 1);
  {
    std::ofstream out(dir / "bad.toml");
    out << "[weights]\nmanual = 0\n";
  }
  CHECK_THROWS_AS(PipelineConfig::load((dir / "bad.toml").string()), Error);
  {
    std::ofstream out(dir / "typo.toml");
    out << "[noise]\nlamda = 3\n";
  }
  CHECK_THROWS_AS(PipelineConfig::load((dir / "typo.toml").string()), Error);
}

TEST_CASE("toy corpus is deterministic") {
  const fs::path a = scratch("toy_a"), b = scratch("toy_b");
  gen_toy_corpus(10, 1, a.string());
  gen_toy_corpus(10, 1, b.string());
  for (const char* f : {"manual.jsonl", "automatic.jsonl", "reports.jsonl", "valid.jsonl"}) {
    CHECK(read_file((a / f).string()) == read_file((b / f).string()));
  }
  CHECK(count_records((a / "automatic.jsonl").string()) == 30);
  CHECK(count_records((a / "valid.jsonl").string()) == 1);
  CHECK_THROWS_AS(gen_toy_corpus(0, 1, a.string()), Error);
}
