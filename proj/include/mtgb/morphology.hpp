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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtgb/language.hpp"

// Grammatical gender of an entity's target-language rendering, from a
// per-language lexicon, determiners and word endings.
namespace mtgb::morph {

enum class PredictedGender { Masculine, Feminine, Neutral, Unknown };

std::string_view to_string(PredictedGender g);
std::optional<PredictedGender> parse_predicted_gender(std::string_view s);

enum class EvidenceKind { Lexicon, Determiner, Suffix };

std::string_view to_string(EvidenceKind k);

struct GenderEvidence {
  EvidenceKind kind = EvidenceKind::Lexicon;
  std::string token;          // surface form as it appears in the sentence
  std::size_t token_index = 0;
  PredictedGender verdict = PredictedGender::Unknown;
  bool weak = false;          // recorded, but never decides on its own
  bool fixed_gender = false;  // lexicon entry for a single-gender profession

  bool operator==(const GenderEvidence&) const = default;
};

struct GenderCall {
  PredictedGender verdict = PredictedGender::Unknown;
  std::vector<GenderEvidence> evidence;  // lexicon first, then determiners, then suffixes
  LanguageCode language{"es"};
  bool fixed_gender = false;
};

struct LexiconEntry {
  PredictedGender gender = PredictedGender::Masculine;
  bool fixed_gender = false;

  bool operator==(const LexiconEntry&) const = default;
};

class GenderLexicon {
 public:
  explicit GenderLexicon(LanguageCode language) : language_(std::move(language)) {}

  const LanguageCode& language() const { return language_; }
  // `surface` is folded before storing. Unknown is rejected.
  void add(std::string_view surface, LexiconEntry entry);
  // Expects a key already folded with fold_for_lexicon.
  std::optional<LexiconEntry> find(std::string_view folded) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }

 private:
  LanguageCode language_;
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

// Languages with a rule inventory.
bool supports(const LanguageCode& language);

// Lowercase, composed, typographic apostrophe replaced, Hebrew/Arabic marks
// removed.
std::string fold_for_lexicon(const LanguageCode& language, std::string_view token);

// Entries from `surface <TAB> gender [<TAB> fixed_gender]` lines, added on top
// of `into`. Blank lines and lines starting with '#' are skipped. Throws
// ParseError naming the line.
void parse_lexicon_lines(const std::vector<std::string>& lines, GenderLexicon& into);

// The lexicon bundled with the library for `language`.
const GenderLexicon& base_lexicon(const LanguageCode& language);

// Base lexicon overlaid with the entries of `path`; file entries win.
GenderLexicon load_lexicon(const LanguageCode& language, const std::string& path);

// Looks at the entity tokens plus the two tokens before the first of them.
// Throws mtgb::Error for unsupported languages or out-of-range indices.
GenderCall extract_gender(const LanguageCode& language, const std::vector<std::string>& target_tokens,
                          const std::vector<std::size_t>& entity_target_indices, const GenderLexicon& lexicon);

}  // namespace mtgb::morph
