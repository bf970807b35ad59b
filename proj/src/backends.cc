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

#include "sumforge/backends.h"

#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "sumforge/error.h"
#include "sumforge/ngram.h"
#include "sumforge/noise.h"
#include "sumforge/parallel.h"
#include "sumforge/text.h"
#include "sumforge/tokenize.h"

namespace sumforge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

using Params = std::map<std::string, std::string>;

void check_keys(const BackendSpec& spec, std::set<std::string> allowed) {
  for (const auto& [key, value] : spec.params) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kConfig,
                  std::string(backend_kind_name(spec.kind)) +
                      " backend: unknown parameter '" + key + "'");
    }
  }
}

const std::string* find(const Params& params, const std::string& key) {
  const auto it = params.find(key);
  return it == params.end() ? nullptr : &it->second;
}

double get_double(const Params& params, const std::string& key, double def) {
  const std::string* v = find(params, key);
  if (!v) return def;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used == v->size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, "parameter " + key + ": not a number: " + *v);
}

long get_int(const Params& params, const std::string& key, long def) {
  const std::string* v = find(params, key);
  if (!v) return def;
  try {
    std::size_t used = 0;
    const long n = std::stol(*v, &used);
    if (used == v->size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kConfig, "parameter " + key + ": not an integer: " + *v);
}

bool get_bool(const Params& params, const std::string& key, bool def) {
  const std::string* v = find(params, key);
  if (!v) return def;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw Error(ErrorCode::kConfig, "parameter " + key + ": not a boolean: " + *v);
}

// Runs fn over items on the worker pool, wrapping errors with the index.
template <typename Fn>
std::vector<std::string> map_items(std::span<const BackendItem> items,
                                   std::size_t jobs, Fn fn) {
  std::vector<std::string> out(items.size());
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    try {
      out[i] = fn(items[i]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kBackendFailure,
                  "item " + std::to_string(items[i].id) + ": " + e.what());
    }
  });
  return out;
}

class IdentityBackend : public Backend {
 public:
  std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) override {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const BackendItem& item : items) out.push_back(item.src);
    return out;
  }
};

class LeadKBackend : public Backend {
 public:
  LeadKBackend(std::size_t k, std::size_t jobs) : k_(k), jobs_(jobs) {}

  std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) override {
    return map_items(items, jobs_, [&](const BackendItem& item) {
      Document doc = parse_document(item.src);
      if (doc.sentences.size() > k_) doc.sentences.resize(k_);
      return render(doc);
    });
  }

 private:
  std::size_t k_;
  std::size_t jobs_;
};

class NoisyCloneBackend : public Backend {
 public:
  NoisyCloneBackend(NoiseConfig cfg, std::size_t jobs)
      : cfg_(std::move(cfg)), jobs_(jobs) {
    cfg_.validate();
  }

  std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) override {
    return map_items(items, jobs_, [&](const BackendItem& item) {
      return render(make_denoising_pair(parse_document(item.src), cfg_, item.id)
                        .noisy);
    });
  }

 private:
  NoiseConfig cfg_;
  std::size_t jobs_;
};

class NgramBackend : public Backend {
 public:
  NgramBackend(NgramLm lm, double copy_weight, DecodeConfig decode,
               std::size_t jobs)
      : lm_(std::move(lm)),
        scorer_(lm_, copy_weight),
        decode_(decode),
        jobs_(jobs) {
    decode_.validate();
  }

  std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) override {
    return map_items(items, jobs_, [&](const BackendItem& item) {
      const DecodeResult r = beam_search(scorer_, tokenize(item.src), decode_);
      return text::join(r.tokens, " ");
    });
  }

 private:
  NgramLm lm_;
  NgramScorer scorer_;
  DecodeConfig decode_;
  std::size_t jobs_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

std::string substitute(std::string tmpl, const std::string& key,
                       const std::string& value) {
  std::size_t pos = 0;
  while ((pos = tmpl.find(key, pos)) != std::string::npos) {
    tmpl.replace(pos, key.size(), value);
    pos += value.size();
  }
  return tmpl;
}

// Temporary directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "sumforge-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) {
      throw Error(ErrorCode::kIo, "cannot create temporary directory");
    }
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

class ExternalBackend : public Backend {
 public:
  ExternalBackend(std::string command, std::string cwd)
      : command_(std::move(command)), cwd_(std::move(cwd)) {
    if (command_.find("{in}") == std::string::npos ||
        command_.find("{out}") == std::string::npos) {
      throw Error(ErrorCode::kConfig,
                  "external backend: cmd must contain {in} and {out}");
    }
  }

  std::vector<std::string> summarize_batch(
      std::span<const BackendItem> items) override {
    std::lock_guard<std::mutex> lock(mu_);
    ScratchDir scratch;
    const fs::path in_path = scratch.path() / "in.jsonl";
    const fs::path out_path = scratch.path() / "out.jsonl";
    {
      std::ofstream in(in_path, std::ios::binary);
      for (const BackendItem& item : items) {
        in << json{{"id", item.id}, {"src", item.src}}.dump(
                  -1, ' ', false, json::error_handler_t::replace)
           << '\n';
      }
      if (!in) throw Error(ErrorCode::kIo, "cannot write " + in_path.string());
    }
    const std::string cmd =
        substitute(substitute(command_, "{in}", shell_quote(in_path.string())),
                   "{out}", shell_quote(out_path.string()));
    run(cmd);
    return read_output(out_path, items);
  }

 private:
  void run(const std::string& cmd) const {
    const pid_t pid = fork();
    if (pid < 0) throw Error(ErrorCode::kBackendFailure, "fork failed");
    if (pid == 0) {
      setpgid(0, 0);
      if (!cwd_.empty() && chdir(cwd_.c_str()) != 0) _exit(126);
      execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    const double timeout = backend_timeout_seconds();
    const auto start = std::chrono::steady_clock::now();
    int status = 0;
    for (;;) {
      const pid_t r = waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (r < 0) throw Error(ErrorCode::kBackendFailure, "waitpid failed");
      const double elapsed = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
      if (timeout > 0 && elapsed > timeout) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        throw Error(ErrorCode::kBackendFailure,
                    "command timed out after " + std::to_string(timeout) + "s");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      throw Error(ErrorCode::kBackendFailure,
                  "command failed with status " +
                      std::to_string(WIFEXITED(status) ? WEXITSTATUS(status)
                                                       : -WTERMSIG(status)));
    }
  }

  static std::vector<std::string> read_output(
      const fs::path& out_path, std::span<const BackendItem> items) {
    std::map<std::uint64_t, std::size_t> position;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (!position.emplace(items[i].id, i).second) {
        throw Error(ErrorCode::kBackendFailure,
                    "duplicate input id " + std::to_string(items[i].id));
      }
    }
    std::ifstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kBackendFailure, "no output file written");
    std::vector<std::string> preds(items.size());
    std::vector<bool> seen(items.size(), false);
    std::string line;
    std::size_t line_no = 0;
    std::size_t count = 0;
    while (std::getline(out, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
          !obj["id"].is_number_integer() || !obj.contains("pred") ||
          !obj["pred"].is_string()) {
        throw Error(ErrorCode::kBackendFailure,
                    "output line " + std::to_string(line_no) +
                        ": expected {\"id\": int, \"pred\": string}");
      }
      const auto id = obj["id"].get<std::uint64_t>();
      const auto it = position.find(id);
      if (it == position.end()) {
        throw Error(ErrorCode::kBackendFailure,
                    "output line " + std::to_string(line_no) + ": unknown id " +
                        std::to_string(id));
      }
      if (seen[it->second]) {
        throw Error(ErrorCode::kBackendFailure,
                    "output line " + std::to_string(line_no) +
                        ": duplicate id " + std::to_string(id));
      }
      seen[it->second] = true;
      preds[it->second] = obj["pred"].get<std::string>();
      ++count;
    }
    if (count != items.size()) {
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (!seen[i]) {
          throw Error(ErrorCode::kBackendFailure,
                      "item " + std::to_string(items[i].id) +
                          ": missing output");
        }
      }
    }
    return preds;
  }

  std::string command_;
  std::string cwd_;
  std::mutex mu_;
};

}  // namespace

std::string_view backend_kind_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::kIdentity: return "identity";
    case BackendKind::kLeadK: return "lead_k";
    case BackendKind::kNoisyClone: return "noisy_clone";
    case BackendKind::kNgramLm: return "ngram_lm";
    case BackendKind::kExternal: return "external";
  }
  return "unknown";
}

BackendSpec BackendSpec::parse(std::string_view text) {
  BackendSpec spec;
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  bool known = false;
  for (BackendKind k : {BackendKind::kIdentity, BackendKind::kLeadK,
                        BackendKind::kNoisyClone, BackendKind::kNgramLm,
                        BackendKind::kExternal}) {
    if (backend_kind_name(k) == kind) {
      spec.kind = k;
      known = true;
    }
  }
  if (!known) {
    throw Error(ErrorCode::kConfig,
                "unknown backend kind '" + std::string(kind) + "'");
  }
  if (colon == std::string_view::npos) return spec;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t eq = rest.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::kConfig,
                  "backend parameter without '=': " + std::string(rest));
    }
    const std::string key(rest.substr(0, eq));
    std::string_view value = rest.substr(eq + 1);
    if (key == "cmd") {
      rest = {};
    } else {
      const std::size_t comma = value.find(',');
      rest = comma == std::string_view::npos ? std::string_view{}
                                             : value.substr(comma + 1);
      value = value.substr(0, comma);
    }
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(
          get_int({{key, std::string(value)}}, key, 0));
    } else {
      spec.params[key] = std::string(value);
    }
  }
  return spec;
}

std::string Backend::summarize(std::string_view src) {
  const BackendItem item{0, std::string(src)};
  return summarize_batch(std::span(&item, 1)).at(0);
}

double backend_timeout_seconds() {
  const char* v = std::getenv("SUMFORGE_BACKEND_TIMEOUT_SECS");
  if (v == nullptr || *v == '\0') return 0.0;
  char* end = nullptr;
  const double secs = std::strtod(v, &end);
  if (end == v || *end != '\0' || secs < 0) {
    throw Error(ErrorCode::kConfig,
                std::string("SUMFORGE_BACKEND_TIMEOUT_SECS: bad value ") + v);
  }
  return secs;
}

std::unique_ptr<Backend> make_backend(const BackendSpec& spec,
                                      const DecodeConfig& decode,
                                      std::size_t jobs) {
  const Params& p = spec.params;
  switch (spec.kind) {
    case BackendKind::kIdentity:
      check_keys(spec, {});
      return std::make_unique<IdentityBackend>();
    case BackendKind::kLeadK: {
      check_keys(spec, {"k"});
      const long k = get_int(p, "k", 3);
      if (k < 1) throw Error(ErrorCode::kConfig, "lead_k: k must be >= 1");
      return std::make_unique<LeadKBackend>(static_cast<std::size_t>(k), jobs);
    }
    case BackendKind::kNoisyClone: {
      check_keys(spec, {"p", "lambda", "permute", "mask"});
      NoiseConfig cfg;
      cfg.infill_p = get_double(p, "p", cfg.infill_p);
      cfg.span_lambda = get_double(p, "lambda", cfg.span_lambda);
      cfg.permute_sentences = get_bool(p, "permute", cfg.permute_sentences);
      if (const std::string* m = find(p, "mask")) cfg.mask_token = *m;
      cfg.seed = spec.seed;
      try {
        return std::make_unique<NoisyCloneBackend>(std::move(cfg), jobs);
      } catch (const Error& e) {
        throw Error(ErrorCode::kConfig, std::string("noisy_clone: ") + e.what());
      }
    }
    case BackendKind::kNgramLm: {
      check_keys(spec, {"train", "order", "smoothing", "copy_weight"});
      const std::string* train = find(p, "train");
      if (!train) throw Error(ErrorCode::kConfig, "ngram_lm: 'train' required");
      const long order = get_int(p, "order", 3);
      const double smoothing = get_double(p, "smoothing", 0.01);
      const double copy_weight = get_double(p, "copy_weight", 0.5);
      try {
        NgramLm lm = train_ngram(read_jsonl(*train), static_cast<int>(order),
                                 smoothing);
        return std::make_unique<NgramBackend>(std::move(lm), copy_weight,
                                              decode, jobs);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kIo) throw;
        throw Error(ErrorCode::kConfig, std::string("ngram_lm: ") + e.what());
      }
    }
    case BackendKind::kExternal: {
      check_keys(spec, {"cmd", "cwd"});
      const std::string* cmd = find(p, "cmd");
      if (!cmd) throw Error(ErrorCode::kConfig, "external: 'cmd' required");
      const std::string* cwd = find(p, "cwd");
      return std::make_unique<ExternalBackend>(*cmd, cwd ? *cwd : std::string());
    }
  }
  throw Error(ErrorCode::kConfig, "unknown backend kind");
}

std::string summarize(const BackendSpec& spec, std::string_view src) {
  return make_backend(spec)->summarize(src);
}

}  // namespace sumforge
