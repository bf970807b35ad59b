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

#include "sumforge/pipeline.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sumforge/bpe.h"
#include "sumforge/error.h"
#include "sumforge/io.h"
#include "sumforge/parallel.h"
#include "sumforge/text.h"
#include "sumforge/tokenize.h"

namespace sumforge {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::size_t kPrepChunk = 1024;

std::string in_workdir(const PipelineConfig& cfg, const std::string& name) {
  return (fs::path(cfg.workdir) / name).string();
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw Error(ErrorCode::kConfig, what + " is not set");
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo, what + " not found: " + path);
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::uint64_t hash_file(const std::string& path,
                        std::uint64_t limit = UINT64_MAX) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::uint64_t h = fnv1a64("");
  std::vector<char> buf(1 << 16);
  std::uint64_t left = limit;
  while (left > 0 && in) {
    const auto want = static_cast<std::streamsize>(
        std::min<std::uint64_t>(left, buf.size()));
    in.read(buf.data(), want);
    const auto got = static_cast<std::uint64_t>(in.gcount());
    if (got == 0) break;
    h = fnv1a64(std::string_view(buf.data(), got), h);
    left -= got;
  }
  return h;
}

// Same path as written in artifacts: relative to the work directory, so
// bundles do not depend on where the run happened.
std::string bundle_path(const PipelineConfig& cfg, const std::string& path) {
  return fs::proximate(fs::absolute(path), fs::absolute(cfg.workdir))
      .generic_string();
}

void write_stub_manifest(const PipelineConfig& cfg, const std::string& name,
                         const std::string& corpus, std::size_t size,
                         const std::string& out) {
  const DatasetSpec spec{name, bundle_path(cfg, corpus), 1, size};
  write_manifest_file(std::span(&spec, 1), cfg.seed, size, out);
}

Document maybe_subword(Document doc, const BpeModel* bpe) {
  if (bpe == nullptr) return doc;
  for (Tokens& s : doc.sentences) s = bpe->apply(s);
  return doc;
}

// Checkpoint: how many items of back.jsonl.partial are final, how many
// bytes they take, the hash of those bytes and the hash of the input.
struct Checkpoint {
  std::size_t completed = 0;
  std::uint64_t bytes = 0;
  std::uint64_t hash = fnv1a64("");
  std::uint64_t input_hash = 0;
  bool complete = false;
};

constexpr std::string_view kCheckpointHeader = "#sumforge-ckpt v1";

std::string checkpoint_text(const Checkpoint& c) {
  std::ostringstream ss;
  ss << kCheckpointHeader << '\n'
     << "completed=" << c.completed << '\n'
     << "bytes=" << c.bytes << '\n'
     << "hash=" << hex64(c.hash) << '\n'
     << "input_hash=" << hex64(c.input_hash) << '\n'
     << "complete=" << (c.complete ? 1 : 0) << '\n';
  return ss.str();
}

[[noreturn]] void corrupt(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kCheckpointCorrupt, path + ": " + why);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointHeader) {
    corrupt(path, "bad header");
  }
  Checkpoint c;
  int seen = 0;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) corrupt(path, "bad line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "completed") {
        c.completed = std::stoull(value, &used);
      } else if (key == "bytes") {
        c.bytes = std::stoull(value, &used);
      } else if (key == "hash") {
        c.hash = std::stoull(value, &used, 16);
      } else if (key == "input_hash") {
        c.input_hash = std::stoull(value, &used, 16);
      } else if (key == "complete") {
        c.complete = std::stoi(value, &used) != 0;
      } else {
        corrupt(path, "unknown key " + key);
      }
      if (used != value.size()) corrupt(path, "bad value for " + key);
    } catch (const std::logic_error&) {
      corrupt(path, "bad value for " + key);
    }
    ++seen;
  }
  if (seen != 5) corrupt(path, "missing fields");
  return c;
}

}  // namespace

StageResult run_selfsup_prep(const PipelineConfig& cfg) {
  require_file(cfg.reports, "reports");
  std::optional<BpeModel> bpe;
  if (cfg.noise_level == NoiseLevel::kSubword) {
    bpe = BpeModel::load_file(cfg.bpe_model);
  }
  const std::string out_path = in_workdir(cfg, "selfsup.jsonl");
  JsonlWriter writer(out_path);
  ReportReader reader(cfg.reports);
  std::size_t count = 0;
  std::vector<std::string> chunk;
  std::vector<AlignedPair> pairs;
  for (bool more = true; more;) {
    chunk.clear();
    while (chunk.size() < kPrepChunk) {
      auto r = reader.next();
      if (!r) {
        more = false;
        break;
      }
      chunk.push_back(std::move(*r));
    }
    pairs.assign(chunk.size(), {});
    parallel_for(chunk.size(), cfg.jobs, [&](std::size_t i) {
      const std::size_t index = count + i;
      try {
        const Document doc =
            maybe_subword(parse_document(chunk[i]), bpe ? &*bpe : nullptr);
        const DenoisingPair p = make_denoising_pair(doc, cfg.noise, index);
        pairs[i] = {render(p.noisy), render(p.clean), "selfsup"};
      } catch (const Error& e) {
        throw Error(e.code(), "report " + std::to_string(index) + ": " + e.what());
      }
    });
    for (const AlignedPair& p : pairs) writer.write(p);
    count += chunk.size();
  }
  if (count == 0) throw Error(ErrorCode::kEmptyDataset, "no reports in " + cfg.reports);
  writer.commit();
  const std::string manifest = in_workdir(cfg, "selfsup.manifest");
  write_stub_manifest(cfg, "selfsup", out_path, count, manifest);
  return {{out_path, manifest}, count};
}

StageResult run_backward_prep(const PipelineConfig& cfg) {
  require_file(cfg.manual, "manual");
  require_file(cfg.automatic, "automatic");
  const std::string out_path = in_workdir(cfg, "backward.jsonl");
  JsonlWriter writer(out_path);
  std::size_t count = 0;
  for (const std::string* path : {&cfg.manual, &cfg.automatic}) {
    JsonlReader reader(*path);
    std::size_t n = 0;
    while (auto pair = reader.next()) {
      writer.write(swap_direction(*pair));
      ++n;
    }
    if (n == 0) throw Error(ErrorCode::kEmptyDataset, "no pairs in " + *path);
    count += n;
  }
  writer.commit();
  const std::string manifest = in_workdir(cfg, "backward.manifest");
  write_stub_manifest(cfg, "backward", out_path, count, manifest);
  return {{out_path, manifest}, count};
}

SynthesisResult run_synthesis(const PipelineConfig& cfg, Backend& backend,
                              const SynthesisOptions& options) {
  require_file(cfg.reports, "reports");
  fs::create_directories(cfg.workdir);
  const std::string final_path = in_workdir(cfg, "back.jsonl");
  const std::string partial_path = final_path + ".partial";
  const std::string ckpt_path = in_workdir(cfg, "synth.ckpt");
  const std::uint64_t input_hash = hash_file(cfg.reports);

  SynthesisResult result;
  Checkpoint ck;
  ck.input_hash = input_hash;
  if (fs::exists(ckpt_path)) {
    ck = read_checkpoint(ckpt_path);
    if (ck.input_hash != input_hash) {
      corrupt(ckpt_path, "reports changed since the checkpoint was written");
    }
    if (ck.complete) {
      if (!fs::is_regular_file(final_path) ||
          fs::file_size(final_path) != ck.bytes ||
          hash_file(final_path) != ck.hash) {
        corrupt(ckpt_path, "does not match " + final_path);
      }
      result.stage = {{final_path, ckpt_path}, ck.completed};
      result.resumed_from = ck.completed;
      result.complete = true;
      return result;
    }
    if (!fs::is_regular_file(partial_path) ||
        fs::file_size(partial_path) < ck.bytes ||
        hash_file(partial_path, ck.bytes) != ck.hash) {
      corrupt(ckpt_path, "does not match " + partial_path);
    }
    // Anything after the last checkpoint was not acknowledged.
    fs::resize_file(partial_path, ck.bytes);
  } else {
    std::ofstream(partial_path, std::ios::binary | std::ios::trunc);
  }
  result.resumed_from = ck.completed;

  std::ofstream out(partial_path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + partial_path);
  ReportReader reader(cfg.reports);
  for (std::size_t i = 0; i < ck.completed; ++i) {
    if (!reader.next()) corrupt(ckpt_path, "index past end of reports");
  }

  std::vector<BackendItem> items;
  for (;;) {
    std::size_t want = cfg.checkpoint_every;
    if (options.stop_after) {
      if (ck.completed >= *options.stop_after) {
        result.stage = {{partial_path, ckpt_path}, ck.completed};
        return result;
      }
      want = std::min(want, *options.stop_after - ck.completed);
    }
    items.clear();
    while (items.size() < want) {
      auto r = reader.next();
      if (!r) break;
      items.push_back({ck.completed + items.size(), std::move(*r)});
    }
    if (items.empty()) break;
    const std::vector<std::string> preds = backend.summarize_batch(items);
    if (preds.size() != items.size()) {
      throw Error(ErrorCode::kBackendFailure,
                  "backend returned " + std::to_string(preds.size()) +
                      " predictions for " + std::to_string(items.size()) +
                      " items");
    }
    std::string block;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (text::normalize_whitespace(preds[i]).empty()) {
        throw Error(ErrorCode::kBackendFailure,
                    "item " + std::to_string(items[i].id) + ": empty prediction");
      }
      block += pair_to_json({preds[i], items[i].src, "back"});
      block += '\n';
    }
    out.write(block.data(), static_cast<std::streamsize>(block.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + partial_path);
    ck.completed += items.size();
    ck.bytes += block.size();
    ck.hash = fnv1a64(block, ck.hash);
    write_file_atomic(ckpt_path, checkpoint_text(ck));
  }
  out.close();
  fs::rename(partial_path, final_path);
  ck.complete = true;
  write_file_atomic(ckpt_path, checkpoint_text(ck));
  result.stage = {{final_path, ckpt_path}, ck.completed};
  result.complete = true;
  return result;
}

SynthesisResult run_synthesis(const PipelineConfig& cfg,
                              const SynthesisOptions& options) {
  auto backend = make_backend(cfg.backend, cfg.decode, cfg.jobs);
  return run_synthesis(cfg, *backend, options);
}

ForwardResult run_forward_prep(const PipelineConfig& cfg) {
  require_file(cfg.manual, "manual");
  require_file(cfg.automatic, "automatic");
  const std::string back = in_workdir(cfg, "back.jsonl");
  require_file(back, "back corpus (run synth first)");

  ForwardResult result;
  const std::pair<const char*, const std::string*> sets[] = {
      {"manual", &cfg.manual}, {"automatic", &cfg.automatic}, {"back", &back}};
  const std::uint64_t weights[] = {cfg.weight_manual, cfg.weight_automatic,
                                   cfg.weight_back};
  for (std::size_t i = 0; i < 3; ++i) {
    DatasetSpec d{sets[i].first, bundle_path(cfg, *sets[i].second), weights[i],
                  count_records(*sets[i].second)};
    if (d.size == 0) throw Error(ErrorCode::kEmptyDataset, d.name);
    result.datasets.push_back(std::move(d));
  }
  result.cycles = cfg.forward_cycles.value_or(cycles_for_one_pass(result.datasets));
  result.upsample = upsample_rates(result.datasets, result.cycles);

  const std::string manifest = in_workdir(cfg, "forward.manifest");
  const std::string bundle = in_workdir(cfg, "forward_datasets.toml");
  write_manifest_file(result.datasets, cfg.seed, result.cycles, manifest);
  write_file_atomic(bundle, dataset_specs_toml(result.datasets));
  std::uint64_t per_cycle = 0;
  for (const DatasetSpec& d : result.datasets) per_cycle += d.weight;
  result.stage = {{manifest, bundle}, per_cycle * result.cycles};
  return result;
}

EvalReport run_eval(std::span<const std::string> predictions,
                    std::span<const std::string> references,
                    std::span<const std::string> sources,
                    CopyMetric copy_metric, std::size_t jobs) {
  return evaluate_texts(predictions, references, sources, copy_metric, jobs);
}

EvalResult run_eval(const PipelineConfig& cfg) {
  const std::string& pairs_path = cfg.eval.pairs.empty() ? cfg.valid : cfg.eval.pairs;
  require_file(pairs_path, "eval pairs");
  const std::vector<AlignedPair> pairs = read_jsonl(pairs_path);
  std::vector<std::string> sources, references;
  sources.reserve(pairs.size());
  references.reserve(pairs.size());
  for (const AlignedPair& p : pairs) {
    sources.push_back(p.src);
    references.push_back(p.tgt);
  }

  EvalResult result;
  std::vector<std::string> predictions;
  if (!cfg.eval.predictions.empty()) {
    require_file(cfg.eval.predictions, "eval predictions");
    predictions = read_lines(cfg.eval.predictions);
  } else {
    std::vector<BackendItem> items;
    items.reserve(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) items.push_back({i, sources[i]});
    auto backend = make_backend(cfg.eval.backend, cfg.decode, cfg.jobs);
    predictions = backend->summarize_batch(items);
    std::string text;
    for (const std::string& p : predictions) {
      std::string line = p;
      std::replace(line.begin(), line.end(), '\n', ' ');
      text += line;
      text += '\n';
    }
    const std::string pred_path = in_workdir(cfg, "eval_predictions.txt");
    write_file_atomic(pred_path, text);
    result.stage.artifacts.push_back(pred_path);
  }
  result.report = run_eval(predictions, references, sources,
                           cfg.eval.copy_metric, cfg.jobs);
  result.row = format_report_row(result.report);
  const std::string json_path = in_workdir(cfg, "eval.json");
  write_file_atomic(json_path, report_json(result.report) + "\n");
  result.stage.artifacts.push_back(json_path);
  result.stage.count = result.report.num_examples;
  return result;
}

Selection select_backward_model(std::span<const CandidateModel> candidates,
                                double ref_copy_pct, double copy_margin) {
  if (candidates.empty()) throw Error(ErrorCode::kNoCandidates, "no candidates");
  if (!(copy_margin >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "copy_margin must be >= 0");
  }
  const double cap = ref_copy_pct + copy_margin;
  const CandidateModel* best = nullptr;
  for (const CandidateModel& c : candidates) {
    if (!(c.valid_copy_pct <= cap)) continue;
    if (best == nullptr || c.valid_rouge1_f > best->valid_rouge1_f ||
        (c.valid_rouge1_f == best->valid_rouge1_f && c.name < best->name)) {
      best = &c;
    }
  }
  if (best != nullptr) return {*best, false};
  for (const CandidateModel& c : candidates) {
    if (best == nullptr || c.valid_copy_pct < best->valid_copy_pct ||
        (c.valid_copy_pct == best->valid_copy_pct &&
         (c.valid_rouge1_f > best->valid_rouge1_f ||
          (c.valid_rouge1_f == best->valid_rouge1_f && c.name < best->name)))) {
      best = &c;
    }
  }
  return {*best, true};
}

SelectResult run_select(const PipelineConfig& cfg) {
  SelectResult result;
  if (cfg.selection.ref_copy_pct) {
    result.ref_copy_pct = *cfg.selection.ref_copy_pct;
  } else {
    require_file(cfg.valid, "valid (or selection.ref_copy_pct)");
    result.ref_copy_pct =
        corpus_stats_file(cfg.valid, kDefaultExtractivitySample, cfg.seed,
                          cfg.jobs, cfg.eval.copy_metric)
            .extractivity;
  }
  result.selection = select_backward_model(
      cfg.selection.candidates, result.ref_copy_pct, cfg.selection.copy_margin);

  json j;
  j["name"] = result.selection.model.name;
  j["valid_rouge1_f"] = result.selection.model.valid_rouge1_f;
  j["valid_copy_pct"] = result.selection.model.valid_copy_pct;
  j["degraded"] = result.selection.degraded;
  j["ref_copy_pct"] = result.ref_copy_pct;
  j["copy_margin"] = cfg.selection.copy_margin;
  const std::string path = in_workdir(cfg, "selected.json");
  write_file_atomic(path, j.dump() + "\n");
  result.stage = {{path}, 1};
  return result;
}

}  // namespace sumforge
