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

// sumforge command-line tool.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumforge/backends.h"
#include "sumforge/bpe.h"
#include "sumforge/corpus.h"
#include "sumforge/error.h"
#include "sumforge/io.h"
#include "sumforge/metrics.h"
#include "sumforge/noise.h"
#include "sumforge/parallel.h"
#include "sumforge/pipeline.h"
#include "sumforge/text.h"
#include "sumforge/tokenize.h"
#include "sumforge/toy.h"

namespace {

using namespace sumforge;
using json = nlohmann::ordered_json;

constexpr int kExitDegraded = 2;
constexpr std::size_t kBatch = 256;

struct Common {
  std::string format = "json";
  std::size_t jobs = 1;
};

bool table(const Common& c) { return c.format == "table"; }

// Reads `path`, or stdin for "-".
std::vector<std::string> input_lines(const std::string& path) {
  if (path != "-") return read_lines(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Writes to `path` atomically, or to stdout for "-".
void output_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

void print_stage(const Common& c, const std::string& stage,
                 const StageResult& r, json extra = json::object()) {
  if (table(c)) {
    std::cout << stage << "\t" << r.count << "\n";
    for (const std::string& a : r.artifacts) std::cout << "  " << a << "\n";
    for (const auto& [k, v] : extra.items()) std::cout << "  " << k << "\t" << v.dump() << "\n";
    return;
  }
  json j;
  j["stage"] = stage;
  j["count"] = r.count;
  j["artifacts"] = r.artifacts;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  std::cout << j.dump() << "\n";
}

int cmd_tokenize(const Common& c, const std::string& in, const std::string& out,
                 bool sentences) {
  std::string text;
  for (const std::string& line : input_lines(in)) {
    const Document doc = parse_document(line);
    if (!table(c)) {
      text += json(doc.sentences).dump() + "\n";
    } else if (sentences) {
      for (const Tokens& s : doc.sentences) text += text::join(s, " ") + "\n";
    } else {
      text += render(doc) + "\n";
    }
  }
  output_text(out, text);
  return 0;
}

int cmd_bpe_learn(const std::string& in, const std::string& out,
                  std::size_t merges, const std::string& marker) {
  BpeLearner learner;
  if (in.size() > 6 && in.ends_with(".jsonl")) {
    JsonlReader reader(in);
    while (auto p = reader.next()) {
      learner.add(parse_document(p->src));
      learner.add(parse_document(p->tgt));
    }
  } else {
    for (const std::string& line : input_lines(in)) learner.add(parse_document(line));
  }
  learner.learn(merges, marker).save_file(out);
  return 0;
}

int cmd_bpe_apply(const std::string& model_path, const std::string& in,
                  const std::string& out) {
  const BpeModel model = BpeModel::load_file(model_path);
  std::vector<std::string> lines;
  for (const std::string& line : input_lines(in)) {
    lines.push_back(text::join(model.apply(parse_document(line).flatten()), " "));
  }
  output_text(out, join_lines(lines));
  return 0;
}

int cmd_bpe_decode(const std::string& model_path, const std::string& in,
                   const std::string& out) {
  const BpeModel model = BpeModel::load_file(model_path);
  std::vector<std::string> lines;
  for (const std::string& line : input_lines(in)) {
    lines.push_back(text::join(model.decode(text::split_whitespace(line)), " "));
  }
  output_text(out, join_lines(lines));
  return 0;
}

int cmd_noise(const Common& c, const std::string& in, const std::string& out,
              const NoiseConfig& cfg) {
  cfg.validate();
  const std::vector<std::string> reports = read_reports(in);
  std::vector<AlignedPair> pairs(reports.size());
  parallel_for(reports.size(), c.jobs, [&](std::size_t i) {
    try {
      const DenoisingPair p = make_denoising_pair(parse_document(reports[i]), cfg, i);
      pairs[i] = {render(p.noisy), render(p.clean), "selfsup"};
    } catch (const Error& e) {
      throw Error(e.code(), "report " + std::to_string(i) + ": " + e.what());
    }
  });
  write_jsonl(pairs, out);
  return 0;
}

int cmd_stats(const Common& c, const std::string& in, std::size_t sample,
              std::uint64_t seed, const std::string& copy_metric) {
  const CorpusStats s =
      corpus_stats_file(in, sample == 0 ? std::nullopt : std::optional(sample),
                        seed, c.jobs, parse_copy_metric(copy_metric));
  if (table(c)) {
    std::printf("#pairs\tsrc (avg, [d1, d9])\ttgt (avg, [d1, d9])\tcopy%%\n");
    std::printf("%zu\t%.0f, [%zu, %zu]\t%.0f, [%zu, %zu]\t%s\n", s.n_pairs,
                s.src_mean, s.src_d1, s.src_d9, s.tgt_mean, s.tgt_d1, s.tgt_d9,
                format_percent(s.extractivity).c_str());
  } else {
    std::cout << stats_json(s) << "\n";
  }
  return 0;
}

int cmd_interleave(const Common& c, const std::string& spec, std::uint64_t seed,
                   std::optional<std::uint64_t> cycles, const std::string& out) {
  const std::vector<DatasetSpec> datasets = load_dataset_specs(spec);
  const std::uint64_t k = cycles.value_or(cycles_for_one_pass(datasets));
  if (out == "-") {
    write_manifest(datasets, seed, k, std::cout);
    return 0;
  }
  write_manifest_file(datasets, seed, k, out);
  json j;
  j["cycles"] = k;
  j["datasets"] = json::array();
  const std::vector<double> rates = upsample_rates(datasets, k);
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    j["datasets"].push_back({{"name", datasets[i].name},
                             {"size", datasets[i].size},
                             {"weight", datasets[i].weight},
                             {"upsample", rates[i]}});
  }
  if (table(c)) {
    for (std::size_t i = 0; i < datasets.size(); ++i) {
      std::printf("%s\t%zu\t%llu\t%.2f\n", datasets[i].name.c_str(), datasets[i].size,
                  static_cast<unsigned long long>(datasets[i].weight), rates[i]);
    }
  } else {
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_score(const Common& c, const std::string& pred, const std::string& ref,
              const std::string& src, const std::string& copy_metric) {
  const std::vector<std::string> p = input_lines(pred);
  const std::vector<std::string> r = input_lines(ref);
  std::vector<std::string> s;
  if (!src.empty()) s = input_lines(src);
  const EvalReport report =
      run_eval(p, r, s, parse_copy_metric(copy_metric), c.jobs);
  std::cout << (table(c) ? format_report_row(report) : report_json(report)) << "\n";
  return 0;
}

// Two input shapes: report records ({"tgt": ...}) give aligned pairs with
// origin "back"; protocol records ({"id": int, "src": ...}) give
// {"id": int, "pred": ...}, which makes the binary usable as an external
// backend.
int cmd_decode(const Common& c, const std::string& spec_text,
               const std::string& in, const std::string& out,
               const DecodeConfig& decode, std::optional<std::uint64_t> seed) {
  BackendSpec spec = BackendSpec::parse(spec_text);
  if (seed) spec.seed = *seed;
  auto backend = make_backend(spec, decode, c.jobs);

  std::vector<BackendItem> items;
  bool protocol = false;
  std::size_t line_no = 0;
  for (const std::string& line : input_lines(in)) {
    ++line_no;
    if (text::normalize_whitespace(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) {
      throw Error(ErrorCode::kMalformedLine, "line " + std::to_string(line_no));
    }
    const bool has_id = j.contains("id");
    if (items.empty()) {
      protocol = has_id;
    } else if (has_id != protocol) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": mixed record kinds");
    }
    const char* field = protocol ? "src" : "tgt";
    if (!j.contains(field)) {
      throw Error(ErrorCode::kMissingField,
                  "line " + std::to_string(line_no) + ": " + field);
    }
    if (!j[field].is_string() || (protocol && !j["id"].is_number_integer())) {
      throw Error(ErrorCode::kMalformedLine,
                  "line " + std::to_string(line_no) + ": wrong field type");
    }
    const std::uint64_t id =
        protocol ? j["id"].get<std::uint64_t>() : items.size();
    items.push_back({id, j[field].get<std::string>()});
  }

  AtomicWriter writer(out);
  for (std::size_t start = 0; start < items.size(); start += kBatch) {
    const std::span<const BackendItem> batch = std::span<const BackendItem>(items).subspan(
        start, std::min(kBatch, items.size() - start));
    const std::vector<std::string> preds = backend->summarize_batch(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (protocol) {
        json j;
        j["id"] = batch[i].id;
        j["pred"] = preds[i];
        writer.stream() << j.dump() << "\n";
      } else {
        writer.stream() << pair_to_json({preds[i], batch[i].src, "back"}) << "\n";
      }
    }
  }
  writer.commit();
  return 0;
}

int cmd_pipeline(const Common& c, const std::string& stage,
                 const std::string& config, std::optional<std::size_t> stop_after) {
  PipelineConfig cfg = PipelineConfig::load(config);
  if (c.jobs != 1) cfg.jobs = c.jobs;
  if (stage == "selfsup") {
    print_stage(c, stage, run_selfsup_prep(cfg));
  } else if (stage == "backward") {
    print_stage(c, stage, run_backward_prep(cfg));
  } else if (stage == "synth") {
    SynthesisOptions opts;
    opts.stop_after = stop_after;
    const SynthesisResult r = run_synthesis(cfg, opts);
    print_stage(c, stage, r.stage,
                {{"resumed_from", r.resumed_from}, {"complete", r.complete}});
  } else if (stage == "forward") {
    const ForwardResult r = run_forward_prep(cfg);
    print_stage(c, stage, r.stage, {{"cycles", r.cycles}, {"upsample", r.upsample}});
  } else if (stage == "eval") {
    const EvalResult r = run_eval(cfg);
    if (table(c)) {
      std::cout << r.row << "\n";
    } else {
      print_stage(c, stage, r.stage, json::parse(report_json(r.report)));
    }
  } else {
    const SelectResult r = run_select(cfg);
    print_stage(c, stage, r.stage,
                {{"name", r.selection.model.name},
                 {"degraded", r.selection.degraded},
                 {"ref_copy_pct", r.ref_copy_pct}});
    if (r.selection.degraded) {
      std::cerr << "sumforge: warning: Degraded: no candidate has copy% <= "
                << format_percent(r.ref_copy_pct + cfg.selection.copy_margin)
                << "; picked the least extractive\n";
      return kExitDegraded;
    }
  }
  return 0;
}

int cmd_gen_toy(const Common& c, std::size_t pairs, std::uint64_t seed,
                const std::string& out) {
  const ToyCorpus t = gen_toy_corpus(pairs, seed, out);
  print_stage(c, "gen-toy", {{t.manual, t.automatic, t.reports, t.valid}, pairs});
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumforge: data pipeline, metrics and decoding for meeting summarization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sumforge 0.1.0");
  Common common;
  std::function<int()> action;

  std::string in = "-", out = "-", model, spec, pred, ref, src, config, backend;
  std::string marker(kDefaultBpeMarker), copy_metric = "f1", stage;
  std::size_t merges = kDefaultBpeMerges, sample = kDefaultExtractivitySample;
  std::size_t toy_pairs = 100;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> cycles, decode_seed;
  std::optional<std::size_t> stop_after;
  bool sentences = false;
  NoiseConfig noise;
  DecodeConfig decode;

  auto* tok = app.add_subcommand("tokenize", "Sentence-split and tokenize text lines");
  tok->add_option("--in", in, "Input text ('-' = stdin)")->capture_default_str();
  tok->add_option("--out", out, "Output ('-' = stdout)")->capture_default_str();
  tok->add_flag("--sentences", sentences, "table: one sentence per output line");
  add_common(tok, common);
  tok->callback([&] { action = [&] { return cmd_tokenize(common, in, out, sentences); }; });

  auto* learn = app.add_subcommand("bpe-learn", "Learn BPE merges");
  learn->add_option("--in", in, "Text corpus, or .jsonl (src and tgt)")->required();
  learn->add_option("--out", out, "Model file")->required();
  learn->add_option("--merges", merges, "Number of merges")->capture_default_str();
  learn->add_option("--marker", marker, "Continuation marker")->capture_default_str();
  add_common(learn, common);
  learn->callback([&] { action = [&] { return cmd_bpe_learn(in, out, merges, marker); }; });

  auto* apply = app.add_subcommand("bpe-apply", "Segment text lines into subwords");
  apply->add_option("--model", model, "Model file")->required();
  apply->add_option("--in", in, "Input text ('-' = stdin)")->capture_default_str();
  apply->add_option("--out", out, "Output ('-' = stdout)")->capture_default_str();
  add_common(apply, common);
  apply->callback([&] { action = [&] { return cmd_bpe_apply(model, in, out); }; });

  auto* undo = app.add_subcommand("bpe-decode", "Merge subword lines back into words");
  undo->add_option("--model", model, "Model file")->required();
  undo->add_option("--in", in, "Input pieces ('-' = stdin)")->capture_default_str();
  undo->add_option("--out", out, "Output ('-' = stdout)")->capture_default_str();
  add_common(undo, common);
  undo->callback([&] { action = [&] { return cmd_bpe_decode(model, in, out); }; });

  auto* nz = app.add_subcommand("noise", "Denoising pairs from reports");
  nz->add_option("--in", in, "Reports JSONL (tgt field)")->required();
  nz->add_option("--out", out, "Pairs JSONL")->required();
  nz->add_option("--p", noise.infill_p, "Masked token fraction")->capture_default_str();
  nz->add_option("--lambda", noise.span_lambda, "Poisson span length mean")
      ->capture_default_str();
  nz->add_flag("--permute,!--no-permute", noise.permute_sentences,
               "Shuffle sentences (default on)");
  nz->add_option("--mask", noise.mask_token, "Mask token")->capture_default_str();
  nz->add_option("--seed", noise.seed, "Random seed")->capture_default_str();
  add_common(nz, common);
  nz->callback([&] { action = [&] { return cmd_noise(common, in, out, noise); }; });

  auto* st = app.add_subcommand("stats", "Length and extractivity statistics");
  st->add_option("--in", in, "Pairs JSONL")->required();
  st->add_option("--sample", sample, "Extractivity sample size (0 = all)")
      ->capture_default_str();
  st->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  st->add_option("--copy-metric", copy_metric, "f1 or precision")
      ->check(CLI::IsMember({"f1", "precision"}))
      ->capture_default_str();
  add_common(st, common);
  st->callback([&] {
    action = [&] { return cmd_stats(common, in, sample, seed, copy_metric); };
  });

  auto* il = app.add_subcommand("interleave", "Weighted training manifest");
  il->add_option("--spec", spec, "Datasets TOML ([[dataset]] name, path, weight)")
      ->required();
  il->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  il->add_option("--cycles", cycles, "Cycles (default: one pass of every set)");
  il->add_option("--out", out, "Manifest ('-' = stdout)")->capture_default_str();
  add_common(il, common);
  il->callback([&] { action = [&] { return cmd_interleave(common, spec, seed, cycles, out); }; });

  auto* sc = app.add_subcommand("score", "ROUGE-1/2/L and copy%");
  sc->add_option("--pred", pred, "Predictions, one per line")->required();
  sc->add_option("--ref", ref, "References, one per line")->required();
  sc->add_option("--src", src, "Sources, one per line (enables copy%)");
  sc->add_option("--copy-metric", copy_metric, "f1 or precision")
      ->check(CLI::IsMember({"f1", "precision"}))
      ->capture_default_str();
  add_common(sc, common);
  sc->callback([&] { action = [&] { return cmd_score(common, pred, ref, src, copy_metric); }; });

  auto* dec = app.add_subcommand("decode", "Run a backend over JSONL records");
  dec->add_option("--backend", backend, "Backend spec, e.g. lead_k:k=2")->required();
  dec->add_option("--in", in, "Reports ({\"tgt\"}) or protocol ({\"id\",\"src\"}) JSONL")
      ->required();
  dec->add_option("--out", out, "Output JSONL")->required();
  dec->add_option("--beam", decode.beam_size, "Beam size")->capture_default_str();
  dec->add_flag("--block-trigrams,!--no-block-trigrams", decode.block_trigrams,
                "Trigram repetition blocking (default on)");
  dec->add_option("--max-len", decode.max_len, "Maximum output length")
      ->capture_default_str();
  dec->add_option("--alpha", decode.length_penalty_alpha, "Length penalty exponent")
      ->capture_default_str();
  dec->add_option("--seed", decode_seed, "Backend seed");
  add_common(dec, common);
  dec->callback([&] {
    action = [&] { return cmd_decode(common, backend, in, out, decode, decode_seed); };
  });

  auto* pl = app.add_subcommand("pipeline", "Run one pipeline stage");
  pl->add_option("stage", stage, "selfsup|backward|synth|forward|eval|select")
      ->required()
      ->check(CLI::IsMember({"selfsup", "backward", "synth", "forward", "eval", "select"}));
  pl->add_option("--config", config, "Pipeline TOML")->required();
  pl->add_option("--stop-after", stop_after, "synth: stop after N items (resume test)");
  add_common(pl, common);
  pl->callback([&] {
    action = [&] { return cmd_pipeline(common, stage, config, stop_after); };
  });

  auto* toy = app.add_subcommand("gen-toy", "Write a synthetic corpus");
  toy->add_option("--pairs", toy_pairs, "Manual pairs (automatic = 3x, reports = 5x)")
      ->capture_default_str();
  toy->add_option("--seed", seed, "Random seed")->capture_default_str();
  toy->add_option("--out", out, "Output directory")->required();
  add_common(toy, common);
  toy->callback([&] {
    action = [&] {
      if (toy_pairs == 0) {
        throw CLI::ValidationError("--pairs", "must be >= 1");
      }
      return cmd_gen_toy(common, toy_pairs, seed, out);
    };
  });

  try {
    app.parse(argc, argv);
    return action();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    std::cerr << "sumforge: error: Usage: " << e.what() << "\n"
              << "Run with --help for usage.\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "sumforge: error: " << error_code_name(e.code()) << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "sumforge: error: Io: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sumforge: error: Internal: " << e.what() << "\n";
    return 1;
  }
}
