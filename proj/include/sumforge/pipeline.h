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

// End-to-end recipes over text corpora:
//
//   selfsup   reports -> denoising pairs (noisy report -> report)
//   backward  manual + automatic, swapped to report -> transcription
//   synth     reports -> synthetic transcriptions via the backward backend
//   forward   weighted schedule over manual, automatic and back
//   eval      ROUGE-1/2/L and copy% of predictions
//   select    backward-model choice under a copy% ceiling
//
// Model training itself happens outside: stages write corpora and
// manifests into the work directory for an external trainer.

#ifndef SUMFORGE_PIPELINE_H_
#define SUMFORGE_PIPELINE_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumforge/backends.h"
#include "sumforge/corpus.h"
#include "sumforge/decode.h"
#include "sumforge/metrics.h"
#include "sumforge/noise.h"

namespace sumforge {

enum class NoiseLevel { kWord, kSubword };

struct CandidateModel {
  std::string name;
  double valid_rouge1_f = 0.0;  // percent
  double valid_copy_pct = 0.0;  // percent
};

struct PipelineConfig {
  std::string workdir = "work";
  std::string manual;
  std::string automatic;
  std::string reports;
  std::string valid;  // optional; reference copy% for selection

  NoiseConfig noise;
  NoiseLevel noise_level = NoiseLevel::kWord;
  std::string bpe_model;  // required for subword-level noise

  DecodeConfig decode;
  BackendSpec backend{BackendKind::kNoisyClone, {}, 0};

  std::uint64_t weight_manual = 2;
  std::uint64_t weight_automatic = 7;
  std::uint64_t weight_back = 100;
  std::optional<std::uint64_t> forward_cycles;  // default: one pass of back

  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::size_t checkpoint_every = 64;

  struct Eval {
    std::string pairs;        // JSONL with src (source) and tgt (reference)
    std::string predictions;  // one per line; empty = run `backend`
    BackendSpec backend;      // identity by default
    CopyMetric copy_metric = CopyMetric::kF1;
  } eval;

  struct Selection {
    std::vector<CandidateModel> candidates;
    std::optional<double> ref_copy_pct;  // default: extractivity of `valid`
    double copy_margin = 0.0;
  } selection;

  // TOML file; relative paths resolve against its directory. Throws
  // Error(kConfig).
  static PipelineConfig load(const std::string& toml_path);
  void validate() const;
};

struct StageResult {
  std::vector<std::string> artifacts;
  std::size_t count = 0;
};

StageResult run_selfsup_prep(const PipelineConfig& cfg);
StageResult run_backward_prep(const PipelineConfig& cfg);

struct SynthesisOptions {
  // Stop (as if killed) once this many items are flushed; for testing
  // resumption.
  std::optional<std::size_t> stop_after;
};

struct SynthesisResult {
  StageResult stage;
  std::size_t resumed_from = 0;
  bool complete = false;
};

// Writes workdir/back.jsonl: for report i, src = backend prediction,
// tgt = report, origin = "back". Progress is checkpointed in
// workdir/synth.ckpt every cfg.checkpoint_every items; a rerun resumes
// after the last checkpoint and yields the same bytes as an
// uninterrupted run. Throws Error(kCheckpointCorrupt) when the checkpoint
// does not match the partial output or the input reports.
SynthesisResult run_synthesis(const PipelineConfig& cfg, Backend& backend,
                              const SynthesisOptions& options = {});
SynthesisResult run_synthesis(const PipelineConfig& cfg,
                              const SynthesisOptions& options = {});

struct ForwardResult {
  StageResult stage;
  std::vector<DatasetSpec> datasets;
  std::uint64_t cycles = 0;
  std::vector<double> upsample;
};

ForwardResult run_forward_prep(const PipelineConfig& cfg);

struct EvalResult {
  EvalReport report;
  std::string row;  // "R1 / R2 / RL" and copy%
  StageResult stage;
};

EvalResult run_eval(const PipelineConfig& cfg);

// Same computation on in-memory texts. Throws Error(kLengthMismatch).
EvalReport run_eval(std::span<const std::string> predictions,
                    std::span<const std::string> references,
                    std::span<const std::string> sources,
                    CopyMetric copy_metric = CopyMetric::kF1,
                    std::size_t jobs = 1);

struct Selection {
  CandidateModel model;
  bool degraded = false;  // no candidate under the copy ceiling
};

// Highest ROUGE-1 among candidates with copy% <= ref_copy_pct +
// copy_margin (ties: lexicographically smaller name). With no qualifying
// candidate, the lowest copy% one (ties: higher ROUGE, then name) is
// returned with degraded set. Throws Error(kNoCandidates) and
// Error(kInvalidArgument) for a negative margin.
Selection select_backward_model(std::span<const CandidateModel> candidates,
                                double ref_copy_pct, double copy_margin);

struct SelectResult {
  Selection selection;
  double ref_copy_pct = 0.0;
  StageResult stage;
};

SelectResult run_select(const PipelineConfig& cfg);

inline constexpr double kNoCopyCap = std::numeric_limits<double>::infinity();

}  // namespace sumforge

#endif  // SUMFORGE_PIPELINE_H_
