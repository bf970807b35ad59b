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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sumforge/backends.h"
#include "sumforge/bpe.h"
#include "sumforge/corpus.h"
#include "sumforge/error.h"
#include "sumforge/metrics.h"
#include "sumforge/noise.h"
#include "sumforge/pipeline.h"
#include "sumforge/tokenize.h"
#include "sumforge/toy.h"

namespace py = pybind11;
using namespace sumforge;

namespace {

using Triple = std::tuple<double, double, double>;

Triple as_tuple(const RougeScore& s) { return {s.precision, s.recall, s.f1}; }

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["r1"] = as_tuple(r.r1);
  d["r2"] = as_tuple(r.r2);
  d["rl"] = as_tuple(r.rl);
  d["copy_pct"] = r.copy_pct;
  d["n"] = r.num_examples;
  d["row"] = format_report_row(r);
  return d;
}

py::dict stats_dict(const CorpusStats& s) {
  py::dict d;
  d["n_pairs"] = s.n_pairs;
  d["src_mean"] = s.src_mean;
  d["src_d1"] = s.src_d1;
  d["src_d9"] = s.src_d9;
  d["tgt_mean"] = s.tgt_mean;
  d["tgt_d1"] = s.tgt_d1;
  d["tgt_d9"] = s.tgt_d9;
  d["extractivity"] = s.extractivity;
  d["extractivity_sample"] = s.extractivity_sample;
  return d;
}

py::dict stage_dict(const StageResult& s) {
  py::dict d;
  d["artifacts"] = s.artifacts;
  d["count"] = s.count;
  return d;
}

NoiseConfig noise_config(double p, double lambda, bool permute,
                         const std::string& mask, std::uint64_t seed) {
  NoiseConfig cfg;
  cfg.infill_p = p;
  cfg.span_lambda = lambda;
  cfg.permute_sentences = permute;
  cfg.mask_token = mask;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_sumforge, m) {
  m.doc() = "sumforge core bindings";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() -> py::object {
    return py::exception<Error>(m, "SumforgeError", PyExc_RuntimeError);
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object exc = type(e.what());
      exc.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  // tokenize
  m.def("split_sentences", &split_sentences, py::arg("text"));
  m.def("tokenize", &tokenize, py::arg("sentence"));
  m.def("metric_tokens", &metric_tokens, py::arg("text"));
  m.def(
      "parse_document",
      [](const std::string& text) { return parse_document(text).sentences; },
      py::arg("text"));
  m.def(
      "render",
      [](const std::vector<Tokens>& sentences, const std::string& sep) {
        return render(Document{sentences}, sep);
      },
      py::arg("sentences"), py::arg("sentence_separator") = " ");

  // bpe
  py::class_<BpeModel>(m, "BpeModel")
      .def(py::init([](const std::vector<std::pair<std::string, std::string>>& rules,
                       const std::string& marker) {
             std::vector<MergeRule> merges;
             for (const auto& [l, r] : rules) merges.push_back({l, r});
             return BpeModel(std::move(merges), marker);
           }),
           py::arg("merges"), py::arg("marker") = std::string(kDefaultBpeMarker))
      .def_static(
          "learn",
          [](const std::vector<std::string>& texts, std::size_t num_merges) {
            std::vector<Document> docs;
            for (const std::string& t : texts) docs.push_back(parse_document(t));
            return bpe_learn(docs, num_merges);
          },
          py::arg("texts"), py::arg("num_merges"))
      .def_static("load", &BpeModel::load_file, py::arg("path"))
      .def("save", &BpeModel::save_file, py::arg("path"))
      .def_property_readonly("marker", &BpeModel::marker)
      .def_property_readonly("merges",
                             [](const BpeModel& b) {
                               std::vector<std::pair<std::string, std::string>> out;
                               for (const MergeRule& r : b.merges()) out.emplace_back(r.left, r.right);
                               return out;
                             })
      .def("apply", [](const BpeModel& b, const Tokens& t) { return b.apply(t); })
      .def("decode", [](const BpeModel& b, const Tokens& t) { return b.decode(t); });

  // noise
  m.def(
      "sample_spans",
      [](std::size_t n, double p, double lambda, std::uint64_t seed, std::uint64_t stream) {
        CounterRng rng(seed, stream);
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const Span& s : sample_spans(n, noise_config(p, lambda, true, "<mask>", 0), rng)) {
          out.emplace_back(s.start, s.length);
        }
        return out;
      },
      py::arg("num_tokens"), py::arg("p") = 0.3, py::arg("span_lambda") = 3.0,
      py::arg("seed") = 0, py::arg("stream") = 0);
  m.def(
      "denoising_pair",
      [](const std::string& report, std::uint64_t index, double p, double lambda,
         bool permute, const std::string& mask, std::uint64_t seed) {
        const DenoisingPair pair = make_denoising_pair(
            parse_document(report), noise_config(p, lambda, permute, mask, seed), index);
        return std::make_pair(render(pair.noisy), render(pair.clean));
      },
      py::arg("report"), py::arg("index") = 0, py::arg("p") = 0.3,
      py::arg("span_lambda") = 3.0, py::arg("permute") = true,
      py::arg("mask") = "<mask>", py::arg("seed") = 0);

  // metrics
  m.def("rouge_n",
        [](const Tokens& pred, const Tokens& ref, std::size_t n) {
          return as_tuple(rouge_n(pred, ref, n));
        },
        py::arg("pred"), py::arg("ref"), py::arg("n"));
  m.def("rouge_l",
        [](const Tokens& pred, const Tokens& ref) { return as_tuple(rouge_l(pred, ref)); },
        py::arg("pred"), py::arg("ref"));
  m.def("lcs_length",
        [](const Tokens& a, const Tokens& b) { return lcs_length(a, b); });
  m.def(
      "copy_percent",
      [](const Tokens& pred, const Tokens& src, const std::string& metric) {
        return copy_percent(pred, src, parse_copy_metric(metric));
      },
      py::arg("pred"), py::arg("src"), py::arg("metric") = "f1");
  m.def(
      "evaluate",
      [](const std::vector<std::string>& predictions,
         const std::vector<std::string>& references,
         const std::vector<std::string>& sources, const std::string& metric,
         std::size_t jobs) {
        return report_dict(evaluate_texts(predictions, references, sources,
                                          parse_copy_metric(metric), jobs));
      },
      py::arg("predictions"), py::arg("references"),
      py::arg("sources") = std::vector<std::string>{}, py::arg("copy_metric") = "f1",
      py::arg("jobs") = 1);
  m.def("format_rouge_row", &format_rouge_row);
  m.def("format_percent", &format_percent);

  // corpus
  m.def(
      "corpus_stats",
      [](const std::string& path, std::optional<std::size_t> sample, std::uint64_t seed,
         const std::string& metric) {
        return stats_dict(corpus_stats_file(path, sample, seed, 1, parse_copy_metric(metric)));
      },
      py::arg("path"), py::arg("sample") = kDefaultExtractivitySample, py::arg("seed") = 0,
      py::arg("copy_metric") = "f1");
  m.def(
      "weighted_interleave",
      [](const std::vector<std::tuple<std::string, std::uint64_t, std::size_t>>& sets,
         std::uint64_t seed, std::optional<std::uint64_t> cycles) {
        std::vector<DatasetSpec> specs;
        for (const auto& [name, weight, size] : sets) specs.push_back({name, "", weight, size});
        const TrainingManifest mf =
            weighted_interleave(specs, seed, cycles ? *cycles : cycles_for_one_pass(specs));
        std::vector<std::pair<std::string, std::size_t>> out;
        out.reserve(mf.entries.size());
        for (const ManifestEntry& e : mf.entries) {
          out.emplace_back(mf.datasets[e.dataset], e.example);
        }
        return out;
      },
      py::arg("datasets"), py::arg("seed") = 0, py::arg("cycles") = py::none());

  // pipeline
  m.def(
      "select_backward_model",
      [](const std::vector<std::tuple<std::string, double, double>>& rows,
         std::optional<double> ref_copy_pct, double margin) {
        std::vector<CandidateModel> cands;
        for (const auto& [name, r1, copy] : rows) cands.push_back({name, r1, copy});
        const Selection s =
            select_backward_model(cands, ref_copy_pct.value_or(kNoCopyCap), margin);
        return std::make_pair(s.model.name, s.degraded);
      },
      py::arg("candidates"), py::arg("ref_copy_pct") = py::none(),
      py::arg("copy_margin") = 0.0);
  m.def(
      "run_stage",
      [](const std::string& config, const std::string& stage) -> py::dict {
        const PipelineConfig cfg = PipelineConfig::load(config);
        py::gil_scoped_release release;
        if (stage == "selfsup") {
          const StageResult r = run_selfsup_prep(cfg);
          py::gil_scoped_acquire g;
          return stage_dict(r);
        }
        if (stage == "backward") {
          const StageResult r = run_backward_prep(cfg);
          py::gil_scoped_acquire g;
          return stage_dict(r);
        }
        if (stage == "synth") {
          const SynthesisResult r = run_synthesis(cfg);
          py::gil_scoped_acquire g;
          py::dict d = stage_dict(r.stage);
          d["resumed_from"] = r.resumed_from;
          d["complete"] = r.complete;
          return d;
        }
        if (stage == "forward") {
          const ForwardResult r = run_forward_prep(cfg);
          py::gil_scoped_acquire g;
          py::dict d = stage_dict(r.stage);
          d["cycles"] = r.cycles;
          d["upsample"] = r.upsample;
          return d;
        }
        if (stage == "eval") {
          const EvalResult r = run_eval(cfg);
          py::gil_scoped_acquire g;
          py::dict d = stage_dict(r.stage);
          d["report"] = report_dict(r.report);
          return d;
        }
        if (stage == "select") {
          const SelectResult r = run_select(cfg);
          py::gil_scoped_acquire g;
          py::dict d = stage_dict(r.stage);
          d["name"] = r.selection.model.name;
          d["degraded"] = r.selection.degraded;
          d["ref_copy_pct"] = r.ref_copy_pct;
          return d;
        }
        throw Error(ErrorCode::kInvalidArgument, "unknown stage '" + stage + "'");
      },
      py::arg("config"), py::arg("stage"));
  m.def(
      "summarize",
      [](const std::string& backend, const std::string& text) {
        return summarize(BackendSpec::parse(backend), text);
      },
      py::arg("backend"), py::arg("text"));
  m.def(
      "gen_toy_corpus",
      [](std::size_t n, std::uint64_t seed, const std::string& out_dir) {
        const ToyCorpus t = gen_toy_corpus(n, seed, out_dir);
        py::dict d;
        d["manual"] = t.manual;
        d["automatic"] = t.automatic;
        d["reports"] = t.reports;
        d["valid"] = t.valid;
        return d;
      },
      py::arg("n_pairs"), py::arg("seed"), py::arg("out_dir"));
}
