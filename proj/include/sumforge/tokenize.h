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

// Rule-based sentence splitting and word tokenization for French text.
//
// The tokenizer splits punctuation off words, splits elided articles and
// pronouns after the apostrophe ("C'est" -> "C'", "est"), keeps numbers
// such as "3,5" intact and keeps whitelisted abbreviations ("M.", "Mme.")
// together with their period. Its output is a fixed point: tokenizing the
// space-joined tokens of a sentence yields the same tokens.

#ifndef SUMFORGE_TOKENIZE_H_
#define SUMFORGE_TOKENIZE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sumforge {

using Tokens = std::vector<std::string>;

// Tokenized text as a sequence of non-empty sentences of non-empty,
// whitespace-free tokens.
struct Document {
  std::vector<Tokens> sentences;

  std::size_t token_count() const noexcept;
  bool empty() const noexcept { return sentences.empty(); }
  Tokens flatten() const;

  friend bool operator==(const Document&, const Document&) = default;
};

// True for single letters ("M", "J") and the French abbreviation
// whitelist entries. `word` excludes the trailing period.
bool is_abbreviation(std::string_view word);

// Splits after ". ! ? …" (and "...") when followed by whitespace and an
// uppercase or opening character, except after abbreviations. Returned
// sentences are whitespace-normalized.
std::vector<std::string> split_sentences(std::string_view text);

Tokens tokenize(std::string_view sentence);

// split_sentences + tokenize. Newlines are hard sentence breaks in
// addition to the punctuation rules.
Document parse_document(std::string_view text);

// Tokens joined by single spaces; sentences joined by `sentence_separator`.
// render(doc, "\n") parses back to `doc` exactly.
std::string render(const Document& doc,
                   std::string_view sentence_separator = " ");

// Lowercased tokens, the comparison form used by every metric.
Tokens metric_tokens(std::string_view text);

}  // namespace sumforge

#endif  // SUMFORGE_TOKENIZE_H_
