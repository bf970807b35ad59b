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

#include "sumforge/tokenize.h"

#include <algorithm>
#include <array>

#include "sumforge/text.h"

namespace sumforge {
namespace {

constexpr std::array<std::string_view, 28> kAbbreviations = {
    "M",   "MM",  "Mme", "Mmes", "Mlle", "Mlles", "Dr",  "Pr",  "Me",  "Mgr",
    "St",  "Ste", "Cie", "art",  "Art",  "cf",    "Cf",  "chap", "env", "ex",
    "fig", "p",   "pp",  "vol",  "av",   "bd",    "hab", "tél"};

constexpr std::array<std::string_view, 3> kApostropheWords = {
    "aujourd'hui", "Aujourd'hui", "prud'hommes"};

bool is_opener(char32_t cp) {
  return cp == U'«' || cp == U'"' || cp == U'(' || cp == U'[' ||
         cp == U'“' || cp == U'‘' || cp == U'¿' || cp == U'¡' ||
         cp == U'\'' || cp == U'—' || cp == U'–';
}

bool is_closer(char32_t cp) {
  return cp == U'»' || cp == U'"' || cp == U')' || cp == U']' ||
         cp == U'”' || cp == U'’' || cp == U'\'';
}

// Punctuation peeled off the end of a word.
bool is_trailing_punct(char32_t cp) {
  return cp == U'.' || cp == U',' || cp == U';' || cp == U':' ||
         cp == U'!' || cp == U'?' || cp == U'…' || cp == U'»' ||
         cp == U'"' || cp == U')' || cp == U']' || cp == U'”';
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == U'’'; }

// Byte offset of the last code point of s (s non-empty).
std::size_t last_cp_offset(std::string_view s) {
  std::size_t pos = s.size() - 1;
  while (pos > 0 && (static_cast<unsigned char>(s[pos]) & 0xC0) == 0x80) --pos;
  return pos;
}

// "S.N.C.F" style: letters separated by single periods.
bool is_dotted_acronym(std::string_view word) {
  if (word.find('.') == std::string_view::npos) return false;
  bool expect_letter = true;
  std::size_t pos = 0;
  while (pos < word.size()) {
    const char32_t cp = text::decode_at(word, pos);
    const std::size_t len =
        text::utf8_length(static_cast<unsigned char>(word[pos]));
    if (expect_letter) {
      if (!text::is_letter(cp)) return false;
    } else if (cp != U'.' && cp != U'-') {
      return false;
    }
    expect_letter = !expect_letter;
    pos += len;
  }
  return true;
}

// True when `chunk` ("M." / "S.N.C.F.") keeps its final period.
bool is_abbreviation_with_period(std::string_view chunk) {
  if (chunk.size() < 2 || chunk.back() != '.') return false;
  const std::string_view word = chunk.substr(0, chunk.size() - 1);
  if (word.empty() || word.back() == '.') return false;
  return is_abbreviation(word) || is_dotted_acronym(word);
}

std::string_view strip_leading_openers(std::string_view s) {
  while (!s.empty() && is_opener(text::decode_at(s, 0))) {
    s.remove_prefix(text::utf8_length(static_cast<unsigned char>(s[0])));
  }
  return s;
}

std::string_view strip_trailing_closers(std::string_view s) {
  while (!s.empty()) {
    const std::size_t off = last_cp_offset(s);
    if (!is_closer(text::decode_at(s, off))) break;
    s = s.substr(0, off);
  }
  return s;
}

// Whether a whitespace-delimited chunk can end a sentence.
bool ends_sentence(std::string_view chunk) {
  std::string_view core = strip_trailing_closers(chunk);
  if (core.empty()) return false;
  const char32_t last = text::decode_at(core, last_cp_offset(core));
  if (last == U'!' || last == U'?' || last == U'…') return true;
  if (last != U'.') return false;
  if (core.size() >= 3 && core.substr(core.size() - 3) == "...") return true;
  return !is_abbreviation_with_period(strip_leading_openers(core));
}

bool starts_sentence(std::string_view chunk) {
  if (chunk.empty()) return false;
  const char32_t first = text::decode_at(chunk, 0);
  return text::is_upper(first) || is_opener(first) || text::is_digit(first);
}

void split_elisions(std::string_view core, Tokens& out) {
  for (std::string_view keep : kApostropheWords) {
    if (core == keep) {
      out.emplace_back(core);
      return;
    }
  }
  std::size_t pos = 0;
  std::size_t start = 0;
  bool letters_only = true;
  while (pos < core.size()) {
    const char32_t cp = text::decode_at(core, pos);
    const std::size_t len =
        text::utf8_length(static_cast<unsigned char>(core[pos]));
    if (is_apostrophe(cp) && letters_only && pos > start &&
        pos + len < core.size() &&
        text::is_letter(text::decode_at(core, pos + len))) {
      out.emplace_back(core.substr(start, pos + len - start));
      start = pos + len;
      pos = start;
      continue;
    }
    if (!text::is_letter(cp)) letters_only = false;
    pos += len;
  }
  if (start < core.size()) out.emplace_back(core.substr(start));
}

void tokenize_chunk(std::string_view chunk, Tokens& out) {
  if (is_abbreviation_with_period(chunk)) {
    out.emplace_back(chunk);
    return;
  }
  std::string_view core = chunk;
  while (!core.empty() && is_opener(text::decode_at(core, 0))) {
    const std::size_t len =
        text::utf8_length(static_cast<unsigned char>(core[0]));
    out.emplace_back(core.substr(0, len));
    core.remove_prefix(len);
  }
  Tokens trailing;
  while (!core.empty()) {
    if (is_abbreviation_with_period(core)) break;
    if (core.size() >= 3 && core.substr(core.size() - 3) == "...") {
      std::size_t dots = 3;
      while (dots < core.size() && core[core.size() - dots - 1] == '.') ++dots;
      trailing.emplace_back(core.substr(core.size() - dots));
      core.remove_suffix(dots);
      continue;
    }
    const std::size_t off = last_cp_offset(core);
    if (!is_trailing_punct(text::decode_at(core, off))) break;
    trailing.emplace_back(core.substr(off));
    core = core.substr(0, off);
  }
  if (!core.empty()) split_elisions(core, out);
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

}  // namespace

std::size_t Document::token_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Tokens Document::flatten() const {
  Tokens out;
  out.reserve(token_count());
  for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
  return out;
}

bool is_abbreviation(std::string_view word) {
  if (word.empty()) return false;
  const std::size_t first_len =
      text::utf8_length(static_cast<unsigned char>(word[0]));
  if (first_len == word.size() && text::is_letter(text::decode_at(word, 0))) {
    return true;
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

std::vector<std::string> split_sentences(std::string_view input) {
  const std::vector<std::string> chunks = text::split_whitespace(input);
  std::vector<std::string> sentences;
  std::string current;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (!current.empty()) current.push_back(' ');
    current.append(chunks[i]);
    if (i + 1 < chunks.size() && ends_sentence(chunks[i]) &&
        starts_sentence(chunks[i + 1])) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

Tokens tokenize(std::string_view sentence) {
  Tokens out;
  for (const std::string& chunk : text::split_whitespace(sentence)) {
    tokenize_chunk(chunk, out);
  }
  return out;
}

Document parse_document(std::string_view input) {
  Document doc;
  std::size_t start = 0;
  while (start <= input.size()) {
    std::size_t end = input.find('\n', start);
    if (end == std::string_view::npos) end = input.size();
    for (const std::string& s : split_sentences(input.substr(start, end - start))) {
      Tokens tokens = tokenize(s);
      if (!tokens.empty()) doc.sentences.push_back(std::move(tokens));
    }
    start = end + 1;
  }
  return doc;
}

std::string render(const Document& doc, std::string_view sentence_separator) {
  std::string out;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    if (i > 0) out.append(sentence_separator);
    out.append(text::join(doc.sentences[i], " "));
  }
  return out;
}

Tokens metric_tokens(std::string_view input) {
  Tokens tokens = tokenize(input);
  for (std::string& t : tokens) t = text::to_lower(t);
  return tokens;
}

}  // namespace sumforge
