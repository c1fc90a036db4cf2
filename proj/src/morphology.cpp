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

#include "mtgb/morphology.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <set>
#include <span>

#include <fmt/format.h>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::morph {

namespace {

#include "mtgb/base_lexicons.inc"

const std::string kModule = "morphology";

using G = PredictedGender;

struct Determiner {
  std::string_view form;
  G gender;
};

// Gender-marking determiners, contracted prepositions and demonstratives.
// Forms shared by both genders (French/Italian l', plural les) are absent on
// purpose.
constexpr Determiner kSpanish[] = {
    {"el", G::Masculine},   {"la", G::Feminine},     {"los", G::Masculine},  {"las", G::Feminine},
    {"un", G::Masculine},   {"una", G::Feminine},    {"unos", G::Masculine}, {"unas", G::Feminine},
    {"al", G::Masculine},   {"del", G::Masculine},   {"este", G::Masculine}, {"esta", G::Feminine},
    {"ese", G::Masculine},  {"esa", G::Feminine},    {"aquel", G::Masculine}, {"aquella", G::Feminine},
    {"estos", G::Masculine}, {"estas", G::Feminine},
};

constexpr Determiner kItalian[] = {
    {"il", G::Masculine},     {"lo", G::Masculine},    {"la", G::Feminine},      {"i", G::Masculine},
    {"gli", G::Masculine},    {"le", G::Feminine},     {"un", G::Masculine},     {"uno", G::Masculine},
    {"una", G::Feminine},     {"un'", G::Feminine},    {"del", G::Masculine},    {"dello", G::Masculine},
    {"della", G::Feminine},   {"al", G::Masculine},    {"allo", G::Masculine},   {"alla", G::Feminine},
    {"dal", G::Masculine},    {"dalla", G::Feminine},  {"nel", G::Masculine},    {"nella", G::Feminine},
    {"sul", G::Masculine},    {"sulla", G::Feminine},  {"dei", G::Masculine},    {"degli", G::Masculine},
    {"delle", G::Feminine},   {"questo", G::Masculine}, {"questa", G::Feminine}, {"quel", G::Masculine},
    {"quello", G::Masculine}, {"quella", G::Feminine},
};

constexpr Determiner kFrench[] = {
    {"le", G::Masculine}, {"la", G::Feminine},  {"un", G::Masculine},  {"une", G::Feminine},
    {"au", G::Masculine}, {"du", G::Masculine}, {"ce", G::Masculine},  {"cet", G::Masculine},
    {"cette", G::Feminine},
};

// "der", "die" and "den" get context checks in german_determiner().
constexpr Determiner kGerman[] = {
    {"der", G::Masculine},  {"die", G::Feminine},   {"das", G::Neutral},    {"ein", G::Masculine},
    {"eine", G::Feminine},  {"einen", G::Masculine}, {"einem", G::Masculine}, {"einer", G::Feminine},
    {"den", G::Masculine},  {"dem", G::Masculine},  {"zum", G::Masculine},  {"zur", G::Feminine},
    {"beim", G::Masculine}, {"vom", G::Masculine},  {"im", G::Masculine},
};

constexpr Determiner kRussian[] = {
    {"этот", G::Masculine}, {"эта", G::Feminine},   {"этого", G::Masculine},
    {"этой", G::Feminine},  {"эту", G::Feminine},   {"этому", G::Masculine},
};

constexpr Determiner kUkrainian[] = {
    {"цей", G::Masculine}, {"ця", G::Feminine}, {"цього", G::Masculine},
    {"цієї", G::Feminine}, {"цю", G::Feminine}, {"цьому", G::Masculine},
};

// "der" after these is dative or genitive feminine as often as masculine.
constexpr std::string_view kGermanDativePrepositions[] = {"mit", "von", "bei", "zu", "nach", "aus",
                                                          "seit", "gegenüber", "außer", "während", "wegen"};

constexpr std::string_view kGermanPluralEndings[] = {"innen", "en", "e", "er"};

enum class SuffixEffect { Decide, Weak, Block };

struct SuffixRule {
  std::u32string_view suffix;
  G gender;
  SuffixEffect effect;
};

// Longest suffix first; the first match wins. A Block rule stops the search
// with no evidence (common-gender endings).
constexpr SuffixRule kSpanishSuffixes[] = {
    {U"triz", G::Feminine, SuffixEffect::Decide}, {U"ista", G::Unknown, SuffixEffect::Block},
    {U"eta", G::Unknown, SuffixEffect::Block},    {U"a", G::Feminine, SuffixEffect::Decide},
    {U"o", G::Masculine, SuffixEffect::Decide},
};

constexpr SuffixRule kItalianSuffixes[] = {
    {U"trice", G::Feminine, SuffixEffect::Decide}, {U"essa", G::Feminine, SuffixEffect::Decide},
    {U"ista", G::Unknown, SuffixEffect::Block},    {U"eta", G::Unknown, SuffixEffect::Block},
    {U"a", G::Feminine, SuffixEffect::Decide},     {U"o", G::Masculine, SuffixEffect::Decide},
};

constexpr SuffixRule kFrenchSuffixes[] = {
    {U"ienne", G::Feminine, SuffixEffect::Decide}, {U"euse", G::Feminine, SuffixEffect::Decide},
    {U"rice", G::Feminine, SuffixEffect::Decide},  {U"ière", G::Feminine, SuffixEffect::Decide},
    {U"esse", G::Feminine, SuffixEffect::Decide},  {U"enne", G::Feminine, SuffixEffect::Decide},
    {U"ère", G::Feminine, SuffixEffect::Decide},   {U"ée", G::Feminine, SuffixEffect::Decide},
    {U"eur", G::Masculine, SuffixEffect::Decide},  {U"ier", G::Masculine, SuffixEffect::Decide},
    {U"ien", G::Masculine, SuffixEffect::Decide},  {U"e", G::Feminine, SuffixEffect::Weak},
};

constexpr SuffixRule kGermanSuffixes[] = {
    {U"innen", G::Feminine, SuffixEffect::Decide}, {U"frau", G::Feminine, SuffixEffect::Decide},
    {U"mann", G::Masculine, SuffixEffect::Decide}, {U"in", G::Feminine, SuffixEffect::Decide},
};

constexpr SuffixRule kRussianSuffixes[] = {
    {U"ка", G::Feminine, SuffixEffect::Decide}, {U"ь", G::Unknown, SuffixEffect::Block},
    {U"а", G::Feminine, SuffixEffect::Decide},  {U"я", G::Feminine, SuffixEffect::Decide},
};

constexpr SuffixRule kUkrainianSuffixes[] = {
    {U"иня", G::Feminine, SuffixEffect::Decide}, {U"ка", G::Feminine, SuffixEffect::Decide},
    {U"ця", G::Feminine, SuffixEffect::Decide},  {U"ь", G::Unknown, SuffixEffect::Block},
    {U"а", G::Feminine, SuffixEffect::Decide},   {U"я", G::Feminine, SuffixEffect::Decide},
};

constexpr SuffixRule kHebrewSuffixes[] = {
    {U"ה", G::Feminine, SuffixEffect::Decide},
    {U"ת", G::Feminine, SuffixEffect::Decide},
};

constexpr std::u32string_view kTaMarbuta = U"ة";

constexpr std::u32string_view kRussianConsonants = U"бвгджзйклмнпрстфхцчшщ";
constexpr std::u32string_view kUkrainianConsonants = U"бвгґджзйклмнпрстфхцчшщ";

// Participle forms written identically for both genders without vowel points.
constexpr std::string_view kHebrewHomographs[] = {"אופה", "מורה", "מנקה", "רועה", "בונה",
                                                   "קונה", "צופה", "מלווה", "רואה"};

constexpr std::string_view kHebrewPrefixLetters = "ובלמשכה";

constexpr std::string_view kArabicPrefixes[] = {"وال", "بال", "فال", "كال", "ال", "لل"};

template <std::size_t N>
std::optional<G> lookup(const Determiner (&table)[N], std::string_view folded) {
  for (const auto& d : table)
    if (d.form == folded) return d.gender;
  return std::nullopt;
}

bool has_letter(std::string_view token) {
  for (char32_t c : text::decode_utf8(token))
    if (text::is_letter(c)) return true;
  return false;
}

bool is_capitalized(std::string_view token) {
  auto cps = text::decode_utf8(token);
  return !cps.empty() && text::is_letter(cps[0]) && text::to_lower(cps[0]) != cps[0];
}

std::size_t codepoints(std::string_view s) { return text::decode_utf8(s).size(); }

// Next capitalized token after `idx` (German nouns), skipping lowercase
// adjectives; falls back to the immediate successor.
std::optional<std::size_t> german_head_after(const std::vector<std::string>& tokens, std::size_t idx) {
  for (std::size_t k = idx + 1; k < tokens.size() && k <= idx + 3; ++k)
    if (is_capitalized(tokens[k])) return k;
  if (idx + 1 < tokens.size()) return idx + 1;
  return std::nullopt;
}

// Dative plurals after "den" always end in -n; "die" plurals take any of
// kGermanPluralEndings.
bool german_plural_head(const std::vector<std::string>& tokens, std::size_t idx, const LanguageCode& lang,
                        bool dative) {
  auto head = german_head_after(tokens, idx);
  if (!head) return false;
  std::string folded = fold_for_lexicon(lang, tokens[*head]);
  if (dative) return text::ends_with(folded, "n") && codepoints(folded) > 3;
  for (auto ending : kGermanPluralEndings)
    if (text::ends_with(folded, ending) && codepoints(folded) > ending.size() + 2) return true;
  return false;
}

std::optional<G> german_determiner(const std::vector<std::string>& tokens, std::size_t idx,
                                   const LanguageCode& lang) {
  std::string folded = fold_for_lexicon(lang, tokens[idx]);
  auto g = lookup(kGerman, folded);
  if (!g) return std::nullopt;
  if (folded == "der" && idx > 0) {
    std::string prev = fold_for_lexicon(lang, tokens[idx - 1]);
    for (auto p : kGermanDativePrepositions)
      if (prev == p) return std::nullopt;
  }
  if ((folded == "die" || folded == "den") && german_plural_head(tokens, idx, lang, folded == "den"))
    return std::nullopt;
  return g;
}

std::optional<G> determiner_gender(const LanguageCode& lang, const std::vector<std::string>& tokens,
                                   std::size_t idx) {
  const std::string& code = lang.str();
  if (code == "de") return german_determiner(tokens, idx, lang);
  std::string folded = fold_for_lexicon(lang, tokens[idx]);
  if (code == "es") return lookup(kSpanish, folded);
  if (code == "it") return lookup(kItalian, folded);
  if (code == "fr") return lookup(kFrench, folded);
  if (code == "ru") return lookup(kRussian, folded);
  if (code == "uk") return lookup(kUkrainian, folded);
  return std::nullopt;
}

// Folded token plus the forms left after stripping clitic prefixes (Hebrew
// one-letter particles, Arabic article combinations).
std::vector<std::string> lexicon_candidates(const LanguageCode& lang, std::string_view token) {
  std::string folded = fold_for_lexicon(lang, token);
  std::vector<std::string> out{folded};
  if (lang.str() == "he") {
    auto cps = text::decode_utf8(folded);
    auto is_prefix = [](char32_t c) {
      return text::decode_utf8(kHebrewPrefixLetters).find(c) != std::u32string::npos;
    };
    for (std::size_t k = 1; k <= 2 && cps.size() >= k + 2 && is_prefix(cps[k - 1]); ++k)
      out.push_back(text::encode_utf8(std::u32string_view(cps).substr(k)));
  } else if (lang.str() == "ar") {
    for (auto prefix : kArabicPrefixes) {
      if (text::starts_with(folded, prefix) && codepoints(folded) >= codepoints(prefix) + 2) {
        out.push_back(folded.substr(prefix.size()));
        break;
      }
    }
  }
  return out;
}

std::span<const SuffixRule> suffix_rules(const std::string& code) {
  if (code == "es") return kSpanishSuffixes;
  if (code == "it") return kItalianSuffixes;
  if (code == "fr") return kFrenchSuffixes;
  if (code == "de") return kGermanSuffixes;
  if (code == "ru") return kRussianSuffixes;
  if (code == "uk") return kUkrainianSuffixes;
  if (code == "he") return kHebrewSuffixes;
  return {};
}

struct SuffixHit {
  G gender;
  bool weak;
};

std::optional<SuffixHit> suffix_gender(const LanguageCode& lang, const std::vector<std::string>& candidates,
                                       const GenderLexicon& lexicon) {
  const std::string& code = lang.str();
  const std::u32string word = text::decode_utf8(candidates.front());
  if (word.size() < 3) return std::nullopt;

  if (code == "he") {
    for (const auto& c : candidates)
      for (auto h : kHebrewHomographs)
        if (c == h) return std::nullopt;
  }

  if (code == "ar") {
    if (word.ends_with(kTaMarbuta)) return SuffixHit{G::Feminine, false};
    // A bare form counts as masculine only when its ta-marbuta counterpart is
    // a known feminine profession.
    for (const auto& c : candidates) {
      auto fem = lexicon.find(c + text::encode_utf8(kTaMarbuta));
      if (fem && fem->gender == G::Feminine) return SuffixHit{G::Masculine, false};
    }
    return std::nullopt;
  }

  for (const auto& rule : suffix_rules(code)) {
    if (!word.ends_with(rule.suffix) || word.size() < rule.suffix.size() + 2) continue;
    switch (rule.effect) {
      case SuffixEffect::Block: return std::nullopt;
      case SuffixEffect::Weak: return SuffixHit{rule.gender, true};
      case SuffixEffect::Decide: return SuffixHit{rule.gender, false};
    }
  }

  if (code == "ru" || code == "uk") {
    auto consonants = code == "ru" ? kRussianConsonants : kUkrainianConsonants;
    if (consonants.find(word.back()) != std::u32string_view::npos) return SuffixHit{G::Masculine, false};
  }
  return std::nullopt;
}

// Non-weak evidence of one kind: agreed verdict, or Unknown on conflict.
std::optional<G> level_verdict(const std::vector<GenderEvidence>& evidence, EvidenceKind kind) {
  std::optional<G> verdict;
  for (const auto& e : evidence) {
    if (e.kind != kind || e.weak) continue;
    if (verdict && *verdict != e.verdict) return G::Unknown;
    verdict = e.verdict;
  }
  return verdict;
}

std::map<std::string, GenderLexicon, std::less<>> build_base_lexicons() {
  std::map<std::string, GenderLexicon, std::less<>> out;
  for (const auto& embedded : kEmbeddedLexicons) {
    GenderLexicon lex{LanguageCode(embedded.language)};
    std::vector<std::string> lines;
    for (auto& l : text::split(embedded.tsv, '\n')) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(std::move(l));
    }
    parse_lexicon_lines(lines, lex);
    out.emplace(std::string(embedded.language), std::move(lex));
  }
  return out;
}

}  // namespace

std::string_view to_string(PredictedGender g) {
  switch (g) {
    case G::Masculine: return "masculine";
    case G::Feminine: return "feminine";
    case G::Neutral: return "neutral";
    case G::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<PredictedGender> parse_predicted_gender(std::string_view s) {
  for (G g : {G::Masculine, G::Feminine, G::Neutral, G::Unknown})
    if (to_string(g) == s) return g;
  return std::nullopt;
}

std::string_view to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::Lexicon: return "lexicon";
    case EvidenceKind::Determiner: return "determiner";
    case EvidenceKind::Suffix: return "suffix";
  }
  return "lexicon";
}

void GenderLexicon::add(std::string_view surface, LexiconEntry entry) {
  if (entry.gender == G::Unknown) throw Error(kModule, "lexicon entries cannot map to unknown");
  std::string key = fold_for_lexicon(language_, surface);
  if (key.empty()) throw Error(kModule, "empty lexicon surface form");
  entries_.insert_or_assign(std::move(key), entry);
}

std::optional<LexiconEntry> GenderLexicon::find(std::string_view folded) const {
  auto it = entries_.find(folded);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool supports(const LanguageCode& language) {
  const auto& builtin = LanguageRegistry::builtin();
  return std::find(builtin.begin(), builtin.end(), language.str()) != builtin.end();
}

std::string fold_for_lexicon(const LanguageCode& language, std::string_view token) {
  std::string s = text::to_lower(text::compose_diacritics(token));
  if (language.str() == "he" || language.str() == "ar") s = text::strip_semitic_marks(s);
  std::u32string cps = text::decode_utf8(s);
  for (auto& c : cps)
    if (c == 0x2019 || c == 0x02BC) c = U'\'';
  return text::encode_utf8(cps);
}

void parse_lexicon_lines(const std::vector<std::string>& lines, GenderLexicon& into) {
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (cols.size() < 2 || cols.size() > 3)
      throw ParseError(kModule, n + 1, fmt::format("expected 2 or 3 columns, got {}", cols.size()));
    auto gender = parse_predicted_gender(text::trim(cols[1]));
    if (!gender || *gender == G::Unknown)
      throw ParseError(kModule, n + 1, fmt::format("bad gender '{}'", cols[1]));
    bool fixed = false;
    if (cols.size() == 3) {
      if (text::trim(cols[2]) != "fixed_gender")
        throw ParseError(kModule, n + 1, fmt::format("unknown flag '{}'", cols[2]));
      fixed = true;
    }
    std::string_view surface = text::trim(cols[0]);
    if (surface.empty()) throw ParseError(kModule, n + 1, "empty surface form");
    into.add(surface, LexiconEntry{*gender, fixed});
  }
}

const GenderLexicon& base_lexicon(const LanguageCode& language) {
  static const auto lexicons = build_base_lexicons();
  auto it = lexicons.find(language.str());
  if (it == lexicons.end()) throw Error(kModule, fmt::format("no bundled lexicon for '{}'", language.str()));
  return it->second;
}

GenderLexicon load_lexicon(const LanguageCode& language, const std::string& path) {
  GenderLexicon lex = base_lexicon(language);
  parse_lexicon_lines(text::read_lines(path, kModule), lex);
  return lex;
}

GenderCall extract_gender(const LanguageCode& language, const std::vector<std::string>& target_tokens,
                          const std::vector<std::size_t>& entity_target_indices, const GenderLexicon& lexicon) {
  if (!supports(language)) throw Error(kModule, fmt::format("unsupported language '{}'", language.str()));
  if (entity_target_indices.empty()) throw Error(kModule, "empty entity index set");
  for (auto i : entity_target_indices)
    if (i >= target_tokens.size())
      throw Error(kModule, fmt::format("entity index {} out of range ({} tokens)", i, target_tokens.size()));

  std::set<std::size_t> entity(entity_target_indices.begin(), entity_target_indices.end());
  std::set<std::size_t> window = entity;
  std::size_t first = *entity.begin();
  for (std::size_t back = 1; back <= 2 && back <= first; ++back) window.insert(first - back);

  GenderCall call{G::Unknown, {}, language, false};
  std::vector<GenderEvidence> lexical, determiners, suffixes;

  for (auto i : entity) {
    const auto& tok = target_tokens[i];
    if (!has_letter(tok)) continue;
    auto candidates = lexicon_candidates(language, tok);
    for (const auto& c : candidates) {
      if (auto entry = lexicon.find(c)) {
        lexical.push_back({EvidenceKind::Lexicon, tok, i, entry->gender, false, entry->fixed_gender});
        break;
      }
    }
  }

  std::set<std::size_t> determiner_positions;
  for (auto i : window) {
    if (auto g = determiner_gender(language, target_tokens, i)) {
      determiners.push_back({EvidenceKind::Determiner, target_tokens[i], i, *g, false, false});
      determiner_positions.insert(i);
    }
  }

  for (auto i : entity) {
    const auto& tok = target_tokens[i];
    if (!has_letter(tok) || determiner_positions.contains(i)) continue;
    if (auto hit = suffix_gender(language, lexicon_candidates(language, tok), lexicon))
      suffixes.push_back({EvidenceKind::Suffix, tok, i, hit->gender, hit->weak, false});
  }

  for (auto* group : {&lexical, &determiners, &suffixes})
    call.evidence.insert(call.evidence.end(), group->begin(), group->end());

  for (auto kind : {EvidenceKind::Lexicon, EvidenceKind::Determiner, EvidenceKind::Suffix}) {
    if (auto v = level_verdict(call.evidence, kind)) {
      call.verdict = *v;
      if (kind == EvidenceKind::Lexicon && *v != G::Unknown)
        call.fixed_gender = std::any_of(lexical.begin(), lexical.end(), [](const auto& e) { return e.fixed_gender; });
      break;
    }
  }
  return call;
}

}  // namespace mtgb::morph
