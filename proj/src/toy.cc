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

#include "sumforge/toy.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "sumforge/error.h"
#include "sumforge/io.h"
#include "sumforge/rng.h"

namespace sumforge {
namespace {

using Words = std::vector<std::string_view>;

struct Noun {
  std::string_view word;
  bool feminine;
};

const std::array<Noun, 32> kNouns = {{
    {"budget", false},      {"projet", false},       {"conseil", false},
    {"rapport", false},     {"calendrier", false},   {"dossier", false},
    {"maire", false},       {"président", false},    {"bilan", false},
    {"vote", false},        {"marché", false},       {"contrat", false},
    {"commission", true},   {"réunion", true},       {"proposition", true},
    {"décision", true},     {"question", true},      {"délibération", true},
    {"subvention", true},   {"direction", true},     {"séance", true},
    {"mairie", true},       {"assemblée", true},     {"équipe", true},
    {"entreprise", true},   {"association", true},   {"ordre", false},
    {"exercice", false},    {"avis", false},         {"article", false},
    {"amendement", false},  {"objectif", false},
}};

const Words kAdjectives = {"prochain", "nouveau", "important", "général",
                           "municipal", "financier", "public", "annuel",
                           "favorable", "précédent", "technique", "local"};

const Words kSayVerbs = {"indique", "rappelle", "souligne", "précise",
                         "estime",  "explique", "propose", "regrette",
                         "constate", "considère"};

const Words kVerbs = {"concerne", "présente", "modifie", "prévoit",
                      "remplace", "accompagne", "finance", "renforce",
                      "examine", "complète", "valide", "reporte"};

const Words kSurnames = {"Martin", "Bernard", "Dubois", "Thomas", "Robert",
                         "Richard", "Petit",  "Durand", "Leroy",  "Moreau",
                         "Simon",  "Laurent", "Lefebvre", "Michel", "Garcia"};

const Words kPreps = {"pour", "avec", "sur", "dans", "sans", "selon", "après"};

const Words kFillers = {"euh", "ben", "donc", "alors", "voilà", "bon",
                        "hein", "enfin", "quoi", "bah"};

const Words kOralOnly = {"oui", "d'accord", "merci", "bien", "voilà",
                         "exactement", "tout", "à", "fait", "alors"};

// Spoken rewording of a few frequent report words.
std::string_view spoken_variant(std::string_view w) {
  static const std::array<std::pair<std::string_view, std::string_view>, 13>
      kMap = {{{"indique", "dit"},
               {"rappelle", "redit"},
               {"souligne", "insiste"},
               {"précise", "ajoute"},
               {"estime", "pense"},
               {"explique", "raconte"},
               {"propose", "suggère"},
               {"considère", "trouve"},
               {"important", "gros"},
               {"favorable", "d'accord"},
               {"prochain", "suivant"},
               {"concerne", "touche"},
               {"présente", "montre"}}};
  for (const auto& [from, to] : kMap) {
    if (from == w) return to;
  }
  return {};
}

bool starts_with_vowel(std::string_view w) {
  static constexpr std::array<std::string_view, 8> kVowels = {
      "a", "e", "i", "o", "u", "é", "è", "h"};
  for (std::string_view v : kVowels) {
    if (w.substr(0, v.size()) == v) return true;
  }
  return false;
}

template <typename T>
const T& pick(const std::vector<T>& items, CounterRng& rng) {
  return items[rng.below(items.size())];
}

template <typename T, std::size_t N>
const T& pick(const std::array<T, N>& items, CounterRng& rng) {
  return items[rng.below(N)];
}

using Pieces = std::vector<std::string>;

void noun_phrase(Pieces& out, CounterRng& rng) {
  const Noun& n = pick(kNouns, rng);
  const double r = rng.uniform();
  if (r < 0.55) {
    if (starts_with_vowel(n.word)) {
      out.emplace_back("l'");
    } else {
      out.emplace_back(n.feminine ? "la" : "le");
    }
  } else if (r < 0.8) {
    out.emplace_back(n.feminine ? "une" : "un");
  } else {
    out.emplace_back(n.feminine ? "cette" : (starts_with_vowel(n.word) ? "cet" : "ce"));
  }
  out.emplace_back(n.word);
  if (rng.uniform() < 0.3) {
    std::string adj(pick(kAdjectives, rng));
    if (n.feminine) adj += adj.back() == 'e' ? "" : "e";
    if (adj == "nouveaue") adj = "nouvelle";
    if (adj == "publice") adj = "publique";
    if (adj == "annuele") adj = "annuelle";
    if (adj == "financiere") adj = "financière";
    if (adj == "précédente" && !n.feminine) adj = "précédent";
    out.push_back(std::move(adj));
  }
}

void subject(Pieces& out, CounterRng& rng) {
  const double r = rng.uniform();
  if (r < 0.35) {
    out.emplace_back(rng.uniform() < 0.6 ? "M." : "Mme");
    out.emplace_back(pick(kSurnames, rng));
  } else if (r < 0.5) {
    out.emplace_back("nous");
  } else {
    noun_phrase(out, rng);
  }
}

// One report sentence of about `want` pieces.
Pieces sentence(std::size_t want, CounterRng& rng) {
  Pieces s;
  subject(s, rng);
  const bool nous = s.back() == "nous";
  if (rng.uniform() < 0.5) {
    s.emplace_back(nous ? "rappelons" : std::string(pick(kSayVerbs, rng)));
    s.emplace_back("que");
    subject(s, rng);
  }
  const bool plural = s.back() == "nous";
  std::string verb(pick(kVerbs, rng));
  if (plural) verb = verb.substr(0, verb.size() - 1) + "ons";
  s.push_back(std::move(verb));
  noun_phrase(s, rng);
  while (s.size() + 3 <= want) {
    if (rng.uniform() < 0.25) s.emplace_back(",");
    if (rng.uniform() < 0.6) {
      s.emplace_back(pick(kPreps, rng));
      noun_phrase(s, rng);
    } else {
      s.emplace_back("et");
      noun_phrase(s, rng);
    }
  }
  s.emplace_back(rng.uniform() < 0.08 ? "?" : ".");
  return s;
}

void capitalize(std::string& w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 32);
}

std::string lower_first(std::string w) {
  if (!w.empty() && w[0] >= 'A' && w[0] <= 'Z') w[0] = static_cast<char>(w[0] + 32);
  return w;
}

std::string join_pieces(const std::vector<Pieces>& sentences) {
  std::string text;
  for (const Pieces& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string& p = s[i];
      const bool glue =
          text.empty() || p == "," || p == "." ||
          (text.back() == '\'' && i > 0);
      if (!glue) text += ' ';
      text += p;
    }
  }
  return text;
}

std::vector<Pieces> make_report(std::size_t length, CounterRng& rng) {
  std::vector<Pieces> out;
  std::size_t total = 0;
  while (total < length) {
    const std::size_t left = length - total;
    const std::size_t want =
        std::min<std::size_t>(8 + rng.below(15), std::max<std::size_t>(left, 6));
    Pieces s = sentence(want, rng);
    capitalize(s[0]);
    total += s.size();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Pieces> make_transcription(const std::vector<Pieces>& report,
                                       CounterRng& rng) {
  std::vector<Pieces> out;
  for (const Pieces& s : report) {
    Pieces t;
    if (rng.uniform() < 0.3) {
      const std::size_t n = 1 + rng.below(4);
      for (std::size_t i = 0; i < n; ++i) t.emplace_back(pick(kOralOnly, rng));
    }
    for (const std::string& p : s) {
      if (p == "," || p == "?") continue;
      if (p == ".") {
        t.emplace_back(".");
        continue;
      }
      const bool elided = !t.empty() && t.back().back() == '\'';
      if (!elided && rng.uniform() < 0.2) t.emplace_back(pick(kFillers, rng));
      std::string w = p;
      if (w == "M.") w = "monsieur";
      if (w == "Mme") w = "madame";
      if (std::find(kSurnames.begin(), kSurnames.end(), w) == kSurnames.end()) {
        w = lower_first(w);
      }
      const std::string_view alt = spoken_variant(w);
      const double r = rng.uniform();
      if (!alt.empty() && r < 0.7) {
        w = alt;
      } else if (!elided && w.back() != '\'' && r < 0.3) {
        w = pick(kFillers, rng);
      }
      if (w.back() != '\'' && rng.uniform() < 0.1) t.push_back(w);  // false start
      t.push_back(std::move(w));
    }
    if (t.empty() || t.back() != ".") t.emplace_back(".");
    capitalize(t[0]);
    out.push_back(std::move(t));
  }
  return out;
}

std::size_t report_length(CounterRng& rng) {
  const double x = std::exp(std::log(86.0) + 0.9 * rng.normal());
  return std::max<std::size_t>(5, static_cast<std::size_t>(std::llround(x)));
}

void write_pairs(const std::string& path, std::uint64_t seed,
                 std::string_view name, std::size_t n, bool reports_only) {
  AtomicWriter out(path);
  for (std::size_t i = 0; i < n; ++i) {
    const AlignedPair p = toy_pair(seed, fnv1a64(name), i);
    if (reports_only) {
      nlohmann::ordered_json j;
      j["tgt"] = p.tgt;
      out.stream() << j.dump() << '\n';
    } else {
      out.stream() << pair_to_json({p.src, p.tgt, std::string(name)}) << '\n';
    }
  }
  out.commit();
}

}  // namespace

AlignedPair toy_pair(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t index) {
  CounterRng rng = CounterRng(seed, stream).split(index);
  const std::vector<Pieces> report = make_report(report_length(rng), rng);
  const std::vector<Pieces> source = make_transcription(report, rng);
  return {join_pieces(source), join_pieces(report), ""};
}

ToyCorpus gen_toy_corpus(std::size_t n_pairs, std::uint64_t seed,
                         const std::string& out_dir) {
  if (n_pairs == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_pairs must be >= 1");
  }
  std::filesystem::create_directories(out_dir);
  const auto at = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  ToyCorpus c{at("manual.jsonl"), at("automatic.jsonl"), at("reports.jsonl"),
              at("valid.jsonl")};
  write_pairs(c.manual, seed, "manual", n_pairs, false);
  write_pairs(c.automatic, seed, "automatic", 3 * n_pairs, false);
  write_pairs(c.reports, seed, "reports", 5 * n_pairs, true);
  write_pairs(c.valid, seed, "valid", std::max<std::size_t>(1, n_pairs / 10), false);
  return c;
}

}  // namespace sumforge
