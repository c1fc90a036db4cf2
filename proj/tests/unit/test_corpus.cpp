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

#include <fmt/format.h>

#include "fixtures.hpp"
#include "mtgb/corpus.hpp"
#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::corpus {
namespace {

ChallengeInstance make(std::string id, std::string sentence, std::size_t index, std::string phrase, Gender g,
                       Stereotype s, SourceDataset d) {
  return {std::move(id), std::move(sentence), index, std::move(phrase), g, s, d};
}

ChallengeInstance doctor_female() {
  return make("wb-1", "The doctor asked the nurse to help her in the operation", 1, "doctor", Gender::Female,
              Stereotype::Anti, SourceDataset::WinoBias);
}

std::string line_of(const ChallengeInstance& i) {
  auto line = serialize_challenge_set({i});
  line.pop_back();
  return line;
}

TEST(Load, ParsesNativeLine) {
  const auto got = parse_challenge_set(
      {"wb-1\twinobias\tfemale\tanti\t1\tdoctor\tThe doctor asked the nurse to help her in the operation"});
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], doctor_female());
}

TEST(Load, EmptyFileGivesEmptyList) {
  testing::TempDir dir("corpus");
  text::write_file(dir.file("empty.tsv"), "", "test");
  EXPECT_TRUE(load_challenge_set(dir.file("empty.tsv")).empty());
}

TEST(Load, EntityIndexPastLastTokenFailsAtLine1) {
  try {
    parse_challenge_set({"wg-1\twinogender\tmale\tpro\t9\tjanitor\tThe janitor said he was late"});
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("entity_index"), std::string::npos) << e.what();
  }
}

TEST(Load, MalformedLinesNameTheLine) {
  const std::string ok = line_of(doctor_female());
  const std::vector<std::vector<std::string>> bad = {
      {ok, "x\twinobias\tfemale\tanti\t1\tdoctor"},                                         // 6 columns
      {ok, "x\twinobias\twoman\tanti\t1\tdoctor\tThe doctor said she left"},               // bad gender
      {ok, "x\tnews\tfemale\tanti\t1\tdoctor\tThe doctor said she left"},                  // bad dataset
      {ok, "x\twinobias\tfemale\tanti\t1\tnurse\tThe doctor said she left"},               // phrase mismatch
      {ok, "x\twinobias\tfemale\tanti\t1\tdoctor\tThe doctor left early"},                 // no pronoun
      {ok, "x\twinobias\tneutral\tpro\t1\tdoctor\tThe doctor said they left"},             // neutral with pro
      {ok, ok},                                                                             // duplicate id
  };
  for (const auto& lines : bad) {
    try {
      parse_challenge_set(lines);
      ADD_FAILURE() << lines[1];
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << lines[1];
    }
  }
}

TEST(Load, RoundTripThroughFile) {
  std::vector<ChallengeInstance> v = {
      doctor_female(),
      make("wg-2", "The janitor told the visitor that he would be late.", 1, "janitor", Gender::Male,
           Stereotype::Pro, SourceDataset::WinoGender),
      make("wg-3", "The technician said they had finished.", 1, "technician", Gender::Neutral,
           Stereotype::Neutral, SourceDataset::WinoGender)};
  testing::TempDir dir("corpus");
  save_challenge_set(dir.file("c.tsv"), v);
  EXPECT_EQ(load_challenge_set(dir.file("c.tsv")), v);
}

TEST(Stats, EmptyIsAllZero) {
  const auto s = corpus_stats({});
  EXPECT_EQ(s.total, 0u);
  EXPECT_EQ(s, CorpusStats{});
}

// Synthetic instances with the published cell counts; checks the partition
// and the formatting only, not the real corpus.
TEST(Stats, SyntheticTableCountsPartition) {
  std::vector<ChallengeInstance> v;
  auto add = [&](SourceDataset d, Gender g, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      const bool neutral = g == Gender::Neutral;
      v.push_back(make(fmt::format("{}-{}-{}", to_string(d), to_string(g), k),
                       neutral ? "The nurse said they left" : "The nurse said she left", 1, "nurse", g,
                       neutral ? Stereotype::Neutral : Stereotype::Pro, d));
    }
  };
  add(SourceDataset::WinoGender, Gender::Male, 240);
  add(SourceDataset::WinoGender, Gender::Female, 240);
  add(SourceDataset::WinoGender, Gender::Neutral, 240);
  add(SourceDataset::WinoBias, Gender::Male, 1582);
  add(SourceDataset::WinoBias, Gender::Female, 1586);
  const auto s = corpus_stats(v);
  EXPECT_EQ(s.total, 3888u);
  EXPECT_EQ(s.gender_total(Gender::Male), 1822u);
  EXPECT_EQ(s.gender_total(Gender::Female), 1826u);
  EXPECT_EQ(s.gender_total(Gender::Neutral), 240u);
  EXPECT_EQ(s.dataset_total(SourceDataset::WinoGender), 720u);
  EXPECT_EQ(s.dataset_total(SourceDataset::WinoBias), 3168u);
  const auto table = format_stats(s);
  EXPECT_NE(table.find("3888"), std::string::npos) << table;
}

TEST(Stats, CombinedEqualsSumOfSubsets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ChallengeInstance> all, wg, wb;
    const std::size_t n = rng() % 60;
    for (std::size_t k = 0; k < n; ++k) {
      const auto d = rng() % 2 ? SourceDataset::WinoBias : SourceDataset::WinoGender;
      const Gender g = static_cast<Gender>(rng() % 3);
      auto inst = make("i" + std::to_string(k), "The nurse said she left", 1, "nurse", g, Stereotype::Neutral, d);
      all.push_back(inst);
      (d == SourceDataset::WinoGender ? wg : wb).push_back(inst);
    }
    auto sum = corpus_stats(wg);
    sum += corpus_stats(wb);
    const auto combined = corpus_stats(all);
    EXPECT_EQ(combined, sum);
    std::size_t cells = 0;
    for (const auto& row : combined.counts)
      for (auto c : row) cells += c;
    EXPECT_EQ(cells, combined.total);
  }
}

TEST(Inject, PrettyDoctor) {
  const auto out = inject_adjectives({doctor_female()});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].sentence, "The pretty doctor asked the nurse to help her in the operation");
  EXPECT_EQ(out[0].entity_index, 2u);
  EXPECT_EQ(out[0].entity_phrase, "doctor");
  EXPECT_TRUE(is_injected(out[0]));
  EXPECT_NO_THROW(validate(out[0]));
}

TEST(Inject, HandsomeJanitorShiftsIndex) {
  auto janitor = make("wb-2", "The janitor reprimanded the accountant because he got less allowance.", 1, "janitor",
                      Gender::Male, Stereotype::Pro, SourceDataset::WinoBias);
  const auto out = inject_adjectives({janitor});
  EXPECT_EQ(out[0].sentence, "The handsome janitor reprimanded the accountant because he got less allowance.");
  EXPECT_EQ(out[0].entity_index, janitor.entity_index + 1);
  EXPECT_EQ(out[0].gold_gender, janitor.gold_gender);
  EXPECT_EQ(out[0].stereotype, janitor.stereotype);
  EXPECT_EQ(out[0].source_dataset, janitor.source_dataset);
}

TEST(Inject, NeutralPassesThroughUnchanged) {
  auto neutral = make("wg-9", "The technician said they had finished.", 1, "technician", Gender::Neutral,
                      Stereotype::Neutral, SourceDataset::WinoGender);
  const auto out = inject_adjectives({neutral});
  EXPECT_EQ(out[0], neutral);
}

TEST(Inject, SecondApplicationRejected) {
  const auto once = inject_adjectives({doctor_female()});
  EXPECT_THROW(inject_adjectives(once), Error);
}

TEST(Ingest, WinoBiasBrackets) {
  testing::TempDir dir("ingest");
  text::write_file(dir.file("pro.txt"),
                   "1 [The developer] argued with the designer because [he] did not like the design.\n"
                   "2 The developer argued with [the designer] because [her] idea cannot be implemented.\n",
                   "test");
  const auto v = ingest_winobias(dir.file("pro.txt"), Stereotype::Pro, "wb-pro");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].sentence, "The developer argued with the designer because he did not like the design.");
  EXPECT_EQ(v[0].entity_phrase, "developer");
  EXPECT_EQ(v[0].entity_index, 1u);
  EXPECT_EQ(v[0].gold_gender, Gender::Male);
  EXPECT_EQ(v[1].entity_phrase, "designer");
  EXPECT_EQ(v[1].gold_gender, Gender::Female);
  EXPECT_EQ(v[1].stereotype, Stereotype::Pro);
}

TEST(Ingest, WinoGenderUsesOccupationMajority) {
  testing::TempDir dir("ingest");
  text::write_file(dir.file("all.tsv"),
                   "sentid\tsentence\n"
                   "technician.customer.0.female.txt\tThe technician told the customer that she could pay with cash.\n"
                   "technician.customer.1.male.txt\tThe technician told the customer that he could pay with cash.\n"
                   "technician.customer.0.neutral.txt\tThe technician told the customer that they could pay with cash.\n",
                   "test");
  const auto majority = load_occupation_majority(testing::source_path("data/stereotypes/v1/occupations.tsv"));
  const auto v = ingest_winogender(dir.file("all.tsv"), majority);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].entity_phrase, "technician");
  EXPECT_EQ(v[0].stereotype, Stereotype::Anti);
  EXPECT_EQ(v[1].entity_phrase, "customer");
  EXPECT_EQ(v[1].stereotype, Stereotype::Neutral);
  EXPECT_EQ(v[2].gold_gender, Gender::Neutral);
  EXPECT_EQ(v[2].stereotype, Stereotype::Neutral);
}

TEST(Ingest, AggregateFormat) {
  testing::TempDir dir("ingest");
  const std::string l1 = "male\t1\tThe developer argued with the designer because he did not like the design.\tdeveloper";
  const std::string l2 = "female\t1\tThe developer argued with the designer because she did not like the design.\tdeveloper";
  text::write_file(dir.file("en.txt"), l1 + "\n" + l2 + "\n", "test");
  const auto v = ingest_aggregate(dir.file("en.txt"), SourceDataset::WinoBias, {l1}, {l2}, "wb");
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].stereotype, Stereotype::Pro);
  EXPECT_EQ(v[1].stereotype, Stereotype::Anti);
  EXPECT_EQ(v[1].entity_index, 1u);
}

}  // namespace
}  // namespace mtgb::corpus
