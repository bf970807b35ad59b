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

// TOML parsing for pipeline configs and dataset lists.

#include <filesystem>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "sumforge/corpus.h"
#include "sumforge/error.h"
#include "sumforge/pipeline.h"

namespace sumforge {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

toml::table parse_toml(const std::string& path) {
  try {
    return toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    std::ostringstream ss;
    ss << path << ":" << e.source().begin.line << ": " << e.description();
    config_error(ss.str());
  } catch (const std::exception& e) {
    config_error(path + ": " + e.what());
  }
}

void check_keys(const toml::table& table, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, node] : table) {
    if (!allowed.count(std::string(key.str()))) {
      config_error(where + ": unknown key '" + std::string(key.str()) + "'");
    }
  }
}

std::string resolve(const fs::path& base, const std::string& path) {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? path : (base / p).lexically_normal().string();
}

template <typename T>
std::optional<T> get(const toml::table& t, const std::string& key,
                     const std::string& where) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, std::int64_t>) {
    if (node->is_integer()) return node->as_integer()->get();
  } else if constexpr (std::is_same_v<T, bool>) {
    if (node->is_boolean()) return node->as_boolean()->get();
  } else {
    if (node->is_string()) return node->as_string()->get();
  }
  config_error(where + "." + key + ": wrong type");
}

std::uint64_t get_positive(const toml::table& t, const std::string& key,
                           const std::string& where, std::uint64_t def) {
  const auto v = get<std::int64_t>(t, key, where);
  if (!v) return def;
  if (*v < 1) config_error(where + "." + key + " must be >= 1");
  return static_cast<std::uint64_t>(*v);
}

const toml::table* subtable(const toml::table& t, const std::string& key) {
  const toml::node* node = t.get(key);
  if (node == nullptr) return nullptr;
  if (!node->is_table()) config_error(key + ": expected a table");
  return node->as_table();
}

std::string scalar_text(const toml::node& node, const std::string& where) {
  if (node.is_string()) return node.as_string()->get();
  if (node.is_integer()) return std::to_string(node.as_integer()->get());
  if (node.is_boolean()) return node.as_boolean()->get() ? "true" : "false";
  if (node.is_floating_point()) {
    std::ostringstream ss;
    ss.precision(17);
    ss << node.as_floating_point()->get();
    return ss.str();
  }
  config_error(where + ": expected a scalar");
}

BackendSpec parse_backend(const toml::table& t, const std::string& where,
                          const fs::path& base) {
  const auto kind = get<std::string>(t, "kind", where);
  if (!kind) config_error(where + ".kind is required");
  BackendSpec spec = BackendSpec::parse(*kind);
  for (const auto& [key, node] : t) {
    const std::string k(key.str());
    if (k == "kind") continue;
    if (k == "seed") {
      const auto seed = get<std::int64_t>(t, "seed", where);
      spec.seed = static_cast<std::uint64_t>(*seed);
      continue;
    }
    std::string value = scalar_text(node, where + "." + k);
    if (k == "train" || k == "cwd") value = resolve(base, value);
    spec.params[k] = std::move(value);
  }
  return spec;
}

}  // namespace

std::vector<DatasetSpec> load_dataset_specs(const std::string& toml_path) {
  const toml::table root = parse_toml(toml_path);
  const fs::path base = fs::path(toml_path).parent_path();
  check_keys(root, toml_path, {"dataset"});
  const toml::array* list = root["dataset"].as_array();
  if (list == nullptr || list->empty()) {
    config_error(toml_path + ": expected one or more [[dataset]] tables");
  }
  std::vector<DatasetSpec> specs;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const toml::table* t = list->get(i)->as_table();
    const std::string where = "dataset[" + std::to_string(i) + "]";
    if (t == nullptr) config_error(where + ": expected a table");
    check_keys(*t, where, {"name", "path", "weight", "size"});
    DatasetSpec spec;
    const auto name = get<std::string>(*t, "name", where);
    const auto path = get<std::string>(*t, "path", where);
    if (!name || name->empty()) config_error(where + ".name is required");
    if (!path) config_error(where + ".path is required");
    if (!names.insert(*name).second) config_error("duplicate dataset " + *name);
    spec.name = *name;
    spec.path = resolve(base, *path);
    spec.weight = get_positive(*t, "weight", where, 1);
    spec.size = count_records(spec.path);
    if (spec.size == 0) throw Error(ErrorCode::kEmptyDataset, spec.name);
    specs.push_back(std::move(spec));
  }
  return specs;
}

PipelineConfig PipelineConfig::load(const std::string& toml_path) {
  const toml::table root = parse_toml(toml_path);
  const fs::path base = fs::path(toml_path).parent_path();
  check_keys(root, "config",
             {"workdir", "seed", "jobs", "checkpoint_every", "data", "noise",
              "decode", "weights", "forward", "backend", "eval", "selection"});
  PipelineConfig cfg;
  cfg.workdir = resolve(base, get<std::string>(root, "workdir", "config")
                                  .value_or("work"));
  cfg.seed = static_cast<std::uint64_t>(
      get<std::int64_t>(root, "seed", "config").value_or(0));
  cfg.jobs = static_cast<std::size_t>(get_positive(root, "jobs", "config", 1));
  cfg.checkpoint_every = static_cast<std::size_t>(
      get_positive(root, "checkpoint_every", "config", 64));
  cfg.noise.seed = cfg.seed;
  cfg.backend.seed = cfg.seed;

  if (const toml::table* t = subtable(root, "data")) {
    check_keys(*t, "data", {"manual", "automatic", "reports", "valid"});
    cfg.manual = resolve(base, get<std::string>(*t, "manual", "data").value_or(""));
    cfg.automatic =
        resolve(base, get<std::string>(*t, "automatic", "data").value_or(""));
    cfg.reports = resolve(base, get<std::string>(*t, "reports", "data").value_or(""));
    cfg.valid = resolve(base, get<std::string>(*t, "valid", "data").value_or(""));
  }
  if (const toml::table* t = subtable(root, "noise")) {
    check_keys(*t, "noise",
               {"p", "lambda", "permute", "mask", "level", "bpe_model", "seed"});
    cfg.noise.infill_p = get<double>(*t, "p", "noise").value_or(cfg.noise.infill_p);
    cfg.noise.span_lambda =
        get<double>(*t, "lambda", "noise").value_or(cfg.noise.span_lambda);
    cfg.noise.permute_sentences =
        get<bool>(*t, "permute", "noise").value_or(cfg.noise.permute_sentences);
    cfg.noise.mask_token =
        get<std::string>(*t, "mask", "noise").value_or(cfg.noise.mask_token);
    if (auto seed = get<std::int64_t>(*t, "seed", "noise")) {
      cfg.noise.seed = static_cast<std::uint64_t>(*seed);
    }
    const std::string level =
        get<std::string>(*t, "level", "noise").value_or("word");
    if (level == "word") {
      cfg.noise_level = NoiseLevel::kWord;
    } else if (level == "subword") {
      cfg.noise_level = NoiseLevel::kSubword;
    } else {
      config_error("noise.level must be word or subword");
    }
    cfg.bpe_model =
        resolve(base, get<std::string>(*t, "bpe_model", "noise").value_or(""));
  }
  if (const toml::table* t = subtable(root, "decode")) {
    check_keys(*t, "decode", {"beam", "block_trigrams", "max_len", "alpha"});
    cfg.decode.beam_size = get_positive(*t, "beam", "decode", cfg.decode.beam_size);
    cfg.decode.max_len = get_positive(*t, "max_len", "decode", cfg.decode.max_len);
    cfg.decode.block_trigrams =
        get<bool>(*t, "block_trigrams", "decode").value_or(cfg.decode.block_trigrams);
    cfg.decode.length_penalty_alpha =
        get<double>(*t, "alpha", "decode").value_or(cfg.decode.length_penalty_alpha);
  }
  if (const toml::table* t = subtable(root, "weights")) {
    check_keys(*t, "weights", {"manual", "automatic", "back"});
    cfg.weight_manual = get_positive(*t, "manual", "weights", cfg.weight_manual);
    cfg.weight_automatic =
        get_positive(*t, "automatic", "weights", cfg.weight_automatic);
    cfg.weight_back = get_positive(*t, "back", "weights", cfg.weight_back);
  }
  if (const toml::table* t = subtable(root, "forward")) {
    check_keys(*t, "forward", {"cycles"});
    if (t->get("cycles") != nullptr) {
      cfg.forward_cycles = get_positive(*t, "cycles", "forward", 1);
    }
  }
  if (const toml::table* t = subtable(root, "backend")) {
    cfg.backend = parse_backend(*t, "backend", base);
    if (t->get("seed") == nullptr) cfg.backend.seed = cfg.seed;
  }
  if (const toml::table* t = subtable(root, "eval")) {
    check_keys(*t, "eval", {"pairs", "predictions", "copy_metric", "backend"});
    cfg.eval.pairs = resolve(base, get<std::string>(*t, "pairs", "eval").value_or(""));
    cfg.eval.predictions =
        resolve(base, get<std::string>(*t, "predictions", "eval").value_or(""));
    try {
      cfg.eval.copy_metric = parse_copy_metric(
          get<std::string>(*t, "copy_metric", "eval").value_or("f1"));
    } catch (const Error& e) {
      config_error(std::string("eval.copy_metric: ") + e.what());
    }
    if (const toml::table* b = subtable(*t, "backend")) {
      cfg.eval.backend = parse_backend(*b, "eval.backend", base);
    }
  }
  if (const toml::table* t = subtable(root, "selection")) {
    check_keys(*t, "selection", {"ref_copy_pct", "copy_margin", "candidate"});
    cfg.selection.ref_copy_pct = get<double>(*t, "ref_copy_pct", "selection");
    cfg.selection.copy_margin =
        get<double>(*t, "copy_margin", "selection").value_or(0.0);
    if (const toml::node* node = t->get("candidate")) {
      const toml::array* list = node->as_array();
      if (list == nullptr) config_error("selection.candidate: expected array");
      for (std::size_t i = 0; i < list->size(); ++i) {
        const std::string where = "selection.candidate[" + std::to_string(i) + "]";
        const toml::table* c = list->get(i)->as_table();
        if (c == nullptr) config_error(where + ": expected a table");
        check_keys(*c, where, {"name", "rouge1", "copy_pct"});
        CandidateModel m;
        m.name = get<std::string>(*c, "name", where).value_or("");
        const auto r1 = get<double>(*c, "rouge1", where);
        const auto copy = get<double>(*c, "copy_pct", where);
        if (m.name.empty() || !r1 || !copy) {
          config_error(where + ": name, rouge1 and copy_pct are required");
        }
        m.valid_rouge1_f = *r1;
        m.valid_copy_pct = *copy;
        cfg.selection.candidates.push_back(std::move(m));
      }
    }
  }
  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  try {
    noise.validate();
    decode.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  if (weight_manual < 1 || weight_automatic < 1 || weight_back < 1) {
    config_error("weights must be >= 1");
  }
  if (checkpoint_every < 1) config_error("checkpoint_every must be >= 1");
  if (noise_level == NoiseLevel::kSubword && bpe_model.empty()) {
    config_error("noise.level = subword requires noise.bpe_model");
  }
  if (selection.copy_margin < 0) config_error("selection.copy_margin must be >= 0");
}

// Used by run_forward_prep for the trainer bundle.
std::string dataset_specs_toml(std::span<const DatasetSpec> specs) {
  toml::array list;
  for (const DatasetSpec& d : specs) {
    list.push_back(toml::table{{"name", d.name},
                               {"path", d.path},
                               {"weight", static_cast<std::int64_t>(d.weight)},
                               {"size", static_cast<std::int64_t>(d.size)}});
  }
  std::ostringstream ss;
  ss << toml::table{{"dataset", std::move(list)}} << '\n';
  return ss.str();
}

}  // namespace sumforge
