// Copyright 2026 The mtgb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 text helpers shared by every module: tokenization, case folding and
// line-oriented file reading.
namespace mtgb::text {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

// Simple (one-to-one) lowercase mapping for Latin-1, Latin Extended-A and
// Cyrillic. Scripts without case pass through.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

// Canonical composition for the base+combining-mark pairs that occur in the
// supported languages (Latin accents, Cyrillic breve/diaeresis). Enough to
// make decomposed input match NFC lexicon entries.
std::string compose_diacritics(std::string_view s);

// Drops Hebrew points/cantillation and Arabic harakat and tatweel.
std::string strip_semitic_marks(std::string_view s);

bool is_punctuation(char32_t cp);
bool is_letter(char32_t cp);

struct TokenSpan {
  std::size_t begin = 0;  // byte offsets into the input
  std::size_t end = 0;
};

// Whitespace split, then leading and trailing punctuation peeled off one
// character at a time into separate tokens. Inner punctuation ("don't",
// "co-worker") stays attached.
std::vector<std::string> tokenize(std::string_view sentence);
std::vector<TokenSpan> tokenize_spans(std::string_view sentence);

// Byte spans of the plain whitespace-separated words of `sentence`.
std::vector<TokenSpan> whitespace_spans(std::string_view sentence);

// Splits French/Italian elided articles and prepositions ("l'infirmière"
// -> "l'", "infirmière"). Only the first apostrophe of a token splits.
std::vector<std::string> split_elisions(const std::vector<std::string>& tokens);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
bool ends_with(std::string_view s, std::string_view suffix);
bool starts_with(std::string_view s, std::string_view prefix);
bool iequals_ascii(std::string_view a, std::string_view b);

// Reads a whole file as LF-normalized lines (CRLF and lone CR become LF). A
// trailing newline does not produce an empty final line. Throws mtgb::Error
// tagged with `module` if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path, const std::string& module);
std::string read_file(const std::string& path, const std::string& module);
void write_file(const std::string& path, std::string_view content, const std::string& module);

}  // namespace mtgb::text
