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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "mtgb/error.hpp"
#include "mtgb/morphology.hpp"
#include "mtgb/text.hpp"

namespace mtgb::morph {
namespace {

const std::vector<std::string> kLanguages = {"es", "fr", "it", "ru", "uk", "he", "ar", "de"};

class Suite : public ::testing::TestWithParam<std::string> {};

TEST_P(Suite, CuratedFixturesPass) {
  const LanguageCode lang(GetParam());
  const auto cases = testing::load_morph_cases(lang);
  EXPECT_GE(cases.size(), 20u);
  const auto& lexicon = base_lexicon(lang);
  for (const auto& c : cases) {
    const auto call = extract_gender(lang, c.tokens, c.entity, lexicon);
    EXPECT_EQ(to_string(call.verdict), c.expected) << lang.str() << " line " << c.line << ": " << c.sentence << " ("
                                                   << c.note << ")";
  }
}

INSTANTIATE_TEST_SUITE_P(Languages, Suite, ::testing::ValuesIn(kLanguages),
                         [](const auto& info) { return info.param; });

std::vector<std::string> tokens(std::initializer_list<const char*> t) { return {t.begin(), t.end()}; }

TEST(Documented, SpanishDoctorAndNurse) {
  const LanguageCode es("es");
  const auto t = tokens({"El", "doctor", "le", "pidio", "a", "la", "enfermera", "que", "le", "ayudara", "con", "el",
                         "procedimiento"});
  const auto doctor = extract_gender(es, t, {1}, base_lexicon(es));
  EXPECT_EQ(doctor.verdict, PredictedGender::Masculine);
  ASSERT_FALSE(doctor.evidence.empty());
  EXPECT_TRUE(std::any_of(doctor.evidence.begin(), doctor.evidence.end(), [](const GenderEvidence& e) {
    return e.kind == EvidenceKind::Determiner && e.token == "El" && e.verdict == PredictedGender::Masculine;
  }));
  const auto nurse = extract_gender(es, t, {6}, base_lexicon(es));
  EXPECT_EQ(nurse.verdict, PredictedGender::Feminine);
  EXPECT_TRUE(std::any_of(nurse.evidence.begin(), nurse.evidence.end(), [](const GenderEvidence& e) {
    return e.kind == EvidenceKind::Determiner && e.token == "la";
  }));
  EXPECT_TRUE(std::any_of(nurse.evidence.begin(), nurse.evidence.end(), [](const GenderEvidence& e) {
    return e.kind == EvidenceKind::Suffix && e.verdict == PredictedGender::Feminine;
  }));
}

TEST(Documented, ArabicTaMarbuta) {
  const LanguageCode ar("ar");
  const GenderLexicon empty(ar);
  const auto call = extract_gender(ar, tokens({"طالبة"}), {0}, empty);
  EXPECT_EQ(call.verdict, PredictedGender::Feminine);
  ASSERT_EQ(call.evidence.size(), 1u);
  EXPECT_EQ(call.evidence[0].kind, EvidenceKind::Suffix);
}

TEST(Documented, FrenchElidedArticleAloneIsUnknown) {
  const LanguageCode fr("fr");
  const GenderLexicon empty(fr);
  const auto call = extract_gender(fr, tokens({"J'", "ai", "parlé", "à", "l'", "architecte", "hier", "."}), {5}, empty);
  EXPECT_EQ(call.verdict, PredictedGender::Unknown);
}

TEST(Documented, FixedGenderFlagged) {
  const LanguageCode fr("fr");
  const auto call = extract_gender(fr, tokens({"Le", "soldat", "est", "arrivé"}), {1}, base_lexicon(fr));
  EXPECT_EQ(call.verdict, PredictedGender::Masculine);
  EXPECT_TRUE(call.fixed_gender);
  const LanguageCode es("es");
  EXPECT_TRUE(extract_gender(es, tokens({"El", "sastre"}), {1}, base_lexicon(es)).fixed_gender);
  EXPECT_FALSE(extract_gender(es, tokens({"El", "doctor"}), {1}, base_lexicon(es)).fixed_gender);
}

TEST(Errors, UnsupportedLanguageAndBadIndices) {
  LanguageRegistry::add("en");
  const LanguageCode en("en");
  EXPECT_FALSE(supports(en));
  EXPECT_THROW(extract_gender(en, tokens({"the", "doctor"}), {1}, GenderLexicon(en)), Error);
  const LanguageCode es("es");
  EXPECT_THROW(extract_gender(es, tokens({"el", "doctor"}), {}, base_lexicon(es)), Error);
  EXPECT_THROW(extract_gender(es, tokens({"el", "doctor"}), {2}, base_lexicon(es)), Error);
}

TEST(Lexicon, FileEntriesResolve) {
  testing::TempDir dir("lex");
  text::write_file(dir.file("es.tsv"), "panadera\tfeminine\n", "test");
  const LanguageCode es("es");
  const auto lex = load_lexicon(es, dir.file("es.tsv"));
  ASSERT_TRUE(lex.find("panadera"));
  EXPECT_EQ(lex.find("panadera")->gender, PredictedGender::Feminine);
  EXPECT_EQ(lex.find(fold_for_lexicon(es, "Panadera"))->gender, PredictedGender::Feminine);
}

TEST(Lexicon, EmptyFileKeepsBase) {
  testing::TempDir dir("lex");
  text::write_file(dir.file("de.tsv"), "", "test");
  const LanguageCode de("de");
  const auto lex = load_lexicon(de, dir.file("de.tsv"));
  EXPECT_EQ(lex.entries(), base_lexicon(de).entries());
  EXPECT_GT(lex.size(), 0u);
}

TEST(Lexicon, FileEntriesWin) {
  testing::TempDir dir("lex");
  text::write_file(dir.file("fr.tsv"), "# user overrides\nsoldat\tmasculine\nsage-femme\tfeminine\tfixed_gender\n",
                   "test");
  const LanguageCode fr("fr");
  const auto lex = load_lexicon(fr, dir.file("fr.tsv"));
  EXPECT_EQ(lex.find("soldat"), (LexiconEntry{PredictedGender::Masculine, false}));
  EXPECT_EQ(lex.find("sage-femme"), (LexiconEntry{PredictedGender::Feminine, true}));
  EXPECT_EQ(lex.size(), base_lexicon(fr).size() + 1);
}

TEST(Lexicon, BadGenderNamesLine) {
  testing::TempDir dir("lex");
  text::write_file(dir.file("es.tsv"), "panadera\tfeminine\nmedico\tmale\n", "test");
  try {
    load_lexicon(LanguageCode("es"), dir.file("es.tsv"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  GenderLexicon lex{LanguageCode("es")};
  EXPECT_THROW(lex.add("x", {PredictedGender::Unknown, false}), Error);
}

TEST(Lexicon, FoldingIsLanguageAware) {
  EXPECT_EQ(fold_for_lexicon(LanguageCode("ru"), "Врач"), "врач");
  EXPECT_EQ(fold_for_lexicon(LanguageCode("fr"), "L’"), "l'");
  EXPECT_EQ(fold_for_lexicon(LanguageCode("es"), "Médica"), "médica");
  EXPECT_EQ(fold_for_lexicon(LanguageCode("he"), "מוֹרָה"), "מורה");
}

// Reference for the precedence rule, applied to the evidence a call reports.
PredictedGender reference_verdict(const std::vector<GenderEvidence>& evidence) {
  for (auto level : {EvidenceKind::Lexicon, EvidenceKind::Determiner, EvidenceKind::Suffix}) {
    std::optional<PredictedGender> seen;
    bool conflict = false;
    for (const auto& e : evidence) {
      if (e.kind != level || e.weak) continue;
      if (seen && *seen != e.verdict) conflict = true;
      seen = e.verdict;
    }
    if (seen) return conflict ? PredictedGender::Unknown : *seen;
  }
  return PredictedGender::Unknown;
}

// Words that trigger the rules of each language, plus filler.
const std::map<std::string, std::vector<std::string>>& pools() {
  static const std::map<std::string, std::vector<std::string>> p = {
      {"es", {"el", "la", "un", "una", "médico", "doctora", "artista", "actriz", "panadero", "sastre", "con", "de"}},
      {"fr", {"le", "la", "l'", "une", "un", "danseuse", "boulanger", "infirmière", "architecte", "soldat", "avec"}},
      {"it", {"il", "la", "lo", "una", "un'", "medico", "infermiera", "dottoressa", "giornalista", "per"}},
      {"ru", {"этот", "эта", "врач", "медсестра", "учитель", "писательница", "секретарь", "в", "и"}},
      {"uk", {"цей", "ця", "лікар", "медсестра", "вчителька", "кухар", "секретар", "з", "і"}},
      {"he", {"הרופא", "הרופאה", "המורה", "מנהלת", "הנגר", "עם", "את", "ה"}},
      {"ar", {"الطبيب", "طالبة", "مدير", "ممرضة", "في", "مع", "فنان"}},
      {"de", {"der", "die", "das", "ein", "eine", "den", "Arzt", "Ärztin", "Lehrer", "Lehrerinnen", "Kind", "mit"}},
  };
  return p;
}

struct RandomCase {
  std::vector<std::string> tokens;
  std::vector<std::size_t> entity;
};

RandomCase random_case(std::mt19937_64& rng, const std::vector<std::string>& pool) {
  RandomCase c;
  const std::size_t len = 1 + rng() % 7;
  for (std::size_t k = 0; k < len; ++k) c.tokens.push_back(pool[rng() % pool.size()]);
  const std::size_t first = rng() % len;
  const std::size_t count = 1 + rng() % std::min<std::size_t>(2, len - first);
  for (std::size_t k = 0; k < count; ++k) c.entity.push_back(first + k);
  return c;
}

TEST(Properties, EvidenceSoundAndVerdictFollowsPrecedence) {
  std::mt19937_64 rng(99);
  for (const auto& code : kLanguages) {
    const LanguageCode lang(code);
    for (int trial = 0; trial < 400; ++trial) {
      const auto c = random_case(rng, pools().at(code));
      const auto call = extract_gender(lang, c.tokens, c.entity, base_lexicon(lang));
      const std::size_t lo = c.entity.front() >= 2 ? c.entity.front() - 2 : 0;
      for (const auto& e : call.evidence) {
        ASSERT_LT(e.token_index, c.tokens.size());
        EXPECT_EQ(e.token, c.tokens[e.token_index]);
        const bool in_entity = std::find(c.entity.begin(), c.entity.end(), e.token_index) != c.entity.end();
        const bool in_window = in_entity || (e.token_index >= lo && e.token_index < c.entity.front());
        EXPECT_TRUE(in_window) << code << " " << text::join(c.tokens, " ");
        if (e.kind == EvidenceKind::Lexicon) EXPECT_TRUE(in_entity);
        EXPECT_NE(e.verdict, PredictedGender::Unknown);
      }
      EXPECT_EQ(call.verdict, reference_verdict(call.evidence)) << code << " " << text::join(c.tokens, " ");
      if (call.evidence.empty()) EXPECT_EQ(call.verdict, PredictedGender::Unknown);
    }
  }
}

TEST(Properties, LexiconEntryDecides) {
  std::mt19937_64 rng(7);
  const std::vector<PredictedGender> genders = {PredictedGender::Masculine, PredictedGender::Feminine,
                                                PredictedGender::Neutral};
  for (const auto& code : kLanguages) {
    const LanguageCode lang(code);
    for (int trial = 0; trial < 300; ++trial) {
      auto c = random_case(rng, pools().at(code));
      c.entity = {c.entity.front()};
      GenderLexicon lex(lang);
      const auto gender = genders[rng() % genders.size()];
      lex.add(c.tokens[c.entity.front()], {gender, false});
      const auto call = extract_gender(lang, c.tokens, c.entity, lex);
      EXPECT_EQ(call.verdict, gender) << code << " " << text::join(c.tokens, " ");
    }
  }
}

TEST(Properties, NoEvidenceMeansUnknown) {
  std::mt19937_64 rng(3);
  const std::string letters = "bkqxz";
  for (const auto& code : kLanguages) {
    const LanguageCode lang(code);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::string> t(1 + rng() % 6);
      for (auto& w : t) {
        const std::size_t len = 1 + rng() % 8;
        for (std::size_t k = 0; k < len; ++k) w.push_back(letters[rng() % letters.size()]);
      }
      const std::size_t idx = rng() % t.size();
      const auto call = extract_gender(lang, t, {idx}, base_lexicon(lang));
      EXPECT_EQ(call.verdict, PredictedGender::Unknown) << code << " " << text::join(t, " ");
      EXPECT_TRUE(call.evidence.empty());
    }
  }
}

TEST(Properties, WeakEvidenceAloneIsUnknown) {
  const LanguageCode fr("fr");
  const GenderLexicon empty(fr);
  const auto call = extract_gender(fr, tokens({"avec", "architecte"}), {1}, empty);
  ASSERT_EQ(call.evidence.size(), 1u);
  EXPECT_TRUE(call.evidence[0].weak);
  EXPECT_EQ(call.verdict, PredictedGender::Unknown);
  EXPECT_EQ(extract_gender(fr, tokens({"la", "architecte"}), {1}, empty).verdict, PredictedGender::Feminine);
}

TEST(Properties, ConflictWithinLevelIsUnknown) {
  const LanguageCode es("es");
  const GenderLexicon empty(es);
  EXPECT_EQ(extract_gender(es, tokens({"el", "la", "persona"}), {2}, empty).verdict, PredictedGender::Unknown);
}

}  // namespace
}  // namespace mtgb::morph
