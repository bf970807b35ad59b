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

// Small UTF-8 helpers. Only what the tokenizer and metrics need: code point
// iteration, whitespace normalization and Latin-1 range case folding.

#ifndef SUMFORGE_TEXT_H_
#define SUMFORGE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sumforge::text {

// Byte length of the UTF-8 sequence starting with lead byte c (1 for
// invalid lead bytes, so iteration always advances).
std::size_t utf8_length(unsigned char c) noexcept;

// Decodes the code point at text[pos]. Invalid sequences decode as the
// lead byte value.
char32_t decode_at(std::string_view text, std::size_t pos) noexcept;

// Splits into code points, each as its UTF-8 byte string.
std::vector<std::string> code_points(std::string_view text);

bool is_space(char32_t cp) noexcept;
bool is_upper(char32_t cp) noexcept;
bool is_lower(char32_t cp) noexcept;
bool is_letter(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;

// Collapses every whitespace run to one ASCII space and trims both ends.
std::string normalize_whitespace(std::string_view text);

// Splits on whitespace runs; never returns empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

// Lowercases ASCII and the Latin-1 / Latin Extended-A letters used in
// French (À-Þ, Œ, Ÿ).
std::string to_lower(std::string_view text);

std::string join(const std::vector<std::string>& parts,
                 std::string_view separator);

}  // namespace sumforge::text

#endif  // SUMFORGE_TEXT_H_
