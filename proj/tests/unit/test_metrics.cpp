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

#include <algorithm>
#include <random>

#include "generators.hpp"
#include "mtgb/error.hpp"
#include "mtgb/metrics.hpp"
#include "naive_scorer.hpp"

namespace mtgb::metrics {
namespace {

using corpus::Gender;
using corpus::Stereotype;
using morph::PredictedGender;
using pipeline::Status;
using testing::make_record;

constexpr auto M = PredictedGender::Masculine;
constexpr auto F = PredictedGender::Feminine;

TEST(Report, AllCorrectBalanced) {
  std::vector<pipeline::PredictionRecord> r;
  for (int k = 0; k < 6; ++k) {
    r.push_back(make_record("m" + std::to_string(k), Gender::Male, k % 2 ? Stereotype::Pro : Stereotype::Anti, M));
    r.push_back(make_record("f" + std::to_string(k), Gender::Female, k % 2 ? Stereotype::Pro : Stereotype::Anti, F));
  }
  const auto rep = compute_report(r);
  EXPECT_DOUBLE_EQ(rep.acc, 100.0);
  EXPECT_DOUBLE_EQ(rep.delta_g, 0.0);
  EXPECT_DOUBLE_EQ(rep.delta_s, 0.0);
  EXPECT_EQ(rep.counts.evaluated, 12u);
  EXPECT_EQ(rep.system_id, "sys");
  EXPECT_EQ(rep.language, "es");
}

TEST(Report, EverythingMasculine) {
  const std::size_t men = 7, women = 4;
  std::vector<pipeline::PredictionRecord> r;
  for (std::size_t k = 0; k < men; ++k) r.push_back(make_record("m" + std::to_string(k), Gender::Male, Stereotype::Pro, M));
  for (std::size_t k = 0; k < women; ++k)
    r.push_back(make_record("f" + std::to_string(k), Gender::Female, Stereotype::Anti, M));
  const auto rep = compute_report(r);
  EXPECT_EQ(rep.male.tp, men);
  EXPECT_EQ(rep.male.fp, women);
  EXPECT_EQ(rep.male.fn, 0u);
  EXPECT_DOUBLE_EQ(rep.female.recall, 0.0);
  EXPECT_DOUBLE_EQ(rep.female.f1, 0.0);
  const double p = double(men) / double(men + women);
  const double male_f1 = 2 * p * 1.0 / (p + 1.0);
  EXPECT_NEAR(rep.delta_g, 100 * male_f1, 1e-12);
  EXPECT_NEAR(rep.acc, 100.0 * men / (men + women), 1e-12);
}

TEST(Report, EightRecordFixture) {
  const std::vector<pipeline::PredictionRecord> r = {
      make_record("1", Gender::Male, Stereotype::Pro, M),     make_record("2", Gender::Male, Stereotype::Pro, M),
      make_record("3", Gender::Female, Stereotype::Pro, F),   make_record("4", Gender::Female, Stereotype::Pro, F),
      make_record("5", Gender::Male, Stereotype::Anti, F),    make_record("6", Gender::Male, Stereotype::Anti, F),
      make_record("7", Gender::Female, Stereotype::Anti, M),  make_record("8", Gender::Female, Stereotype::Anti, M)};
  const auto rep = compute_report(r);
  EXPECT_DOUBLE_EQ(rep.acc, 50.0);
  EXPECT_DOUBLE_EQ(rep.delta_s, 100.0);
  EXPECT_DOUBLE_EQ(rep.pro_macro_f1, 1.0);
  EXPECT_DOUBLE_EQ(rep.anti_macro_f1, 0.0);
  EXPECT_DOUBLE_EQ(rep.delta_g, 0.0);
}

TEST(Report, UnknownIsAMissForTheGoldClassOnly) {
  const std::vector<pipeline::PredictionRecord> r = {
      make_record("1", Gender::Male, Stereotype::Pro, M),
      make_record("2", Gender::Male, Stereotype::Pro, PredictedGender::Unknown),
      make_record("3", Gender::Female, Stereotype::Pro, PredictedGender::Neutral),
      make_record("4", Gender::Female, Stereotype::Pro, F)};
  const auto rep = compute_report(r);
  EXPECT_EQ(rep.male.fn, 1u);
  EXPECT_EQ(rep.female.fp, 0u);
  EXPECT_EQ(rep.female.fn, 1u);
  EXPECT_EQ(rep.male.fp, 0u);
  EXPECT_EQ(rep.counts.unknown, 2u);
  EXPECT_DOUBLE_EQ(rep.acc, 50.0);
}

TEST(Report, CountsPartitionTotal) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto r = testing::random_predictions(rng, 50);
    const bool evaluable = std::any_of(r.begin(), r.end(), [](const auto& p) {
      return p.status == Status::Ok && p.gold_gender != Gender::Neutral;
    });
    if (!evaluable) {
      EXPECT_THROW(compute_report(r), Error);
      continue;
    }
    const auto c = compute_report(r).counts;
    EXPECT_EQ(c.total, r.size());
    EXPECT_EQ(c.evaluated + c.translation_failed + c.alignment_dropped + c.fixed_gender + c.neutral_gold, c.total);
    EXPECT_LE(c.unknown, c.evaluated);
  }
}

TEST(Report, MatchesNaiveScorer) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = testing::random_predictions(rng, 50);
    const auto naive = testing::naive_score(r);
    if (!naive) continue;
    const auto rep = compute_report(r);
    EXPECT_NEAR(rep.acc, naive->acc, 1e-9);
    EXPECT_NEAR(rep.delta_g, naive->delta_g, 1e-9);
    EXPECT_NEAR(rep.delta_s, naive->delta_s, 1e-9);
    ++compared;
  }
  EXPECT_GT(compared, 900);
}

TEST(Report, PermutationInvariantAndBounded) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto r = testing::random_predictions(rng, 50);
    if (!testing::naive_score(r)) continue;
    const auto a = compute_report(r);
    std::shuffle(r.begin(), r.end(), rng);
    const auto b = compute_report(r);
    EXPECT_EQ(to_json(a), to_json(b));
    EXPECT_GE(a.acc, 0.0);
    EXPECT_LE(a.acc, 100.0);
    EXPECT_GE(a.delta_g, -100.0);
    EXPECT_LE(a.delta_g, 100.0);
    EXPECT_GE(a.delta_s, -100.0);
    EXPECT_LE(a.delta_s, 100.0);
  }
}

TEST(Report, RejectsMixedRunsAndEmptyPopulations) {
  auto a = make_record("1", Gender::Male, Stereotype::Pro, M);
  auto b = make_record("2", Gender::Male, Stereotype::Pro, M);
  b.language = LanguageCode("fr");
  EXPECT_THROW(compute_report({a, b}), Error);
  EXPECT_THROW(compute_report({}), Error);
  EXPECT_THROW(compute_report({make_record("1", Gender::Neutral, Stereotype::Neutral, M)}), Error);
}

TEST(Report, JsonRoundTrip) {
  std::mt19937_64 rng(8);
  auto r = testing::random_predictions(rng, 50);
  while (!testing::naive_score(r)) r = testing::random_predictions(rng, 50);
  const auto rep = compute_report(r);
  EXPECT_EQ(to_json(report_from_json(to_json(rep))), to_json(rep));
  EXPECT_THROW(report_from_json("{}"), Error);
}

EvaluationReport with_acc(double acc, std::string lang = "es") {
  EvaluationReport r;
  r.system_id = "sys";
  r.language = std::move(lang);
  r.acc = acc;
  return r;
}

double acc_delta(const std::vector<MetricDelta>& d) {
  return std::find_if(d.begin(), d.end(), [](const auto& m) { return m.metric == "acc"; })->delta;
}

TEST(Compare, InjectionDeltas) {
  const auto es = compare_reports(with_acc(53.1), with_acc(63.5));
  EXPECT_NEAR(acc_delta(es), 10.4, 1e-9);
  EXPECT_NE(format_deltas(es).find("+10.4"), std::string::npos) << format_deltas(es);
  const auto ru = compare_reports(with_acc(37.7, "ru"), with_acc(48.9, "ru"));
  EXPECT_NEAR(acc_delta(ru), 11.2, 1e-9);
  EXPECT_NE(format_deltas(ru).find("+11.2"), std::string::npos);
}

TEST(Compare, IdenticalReportsGiveZero) {
  for (const auto& d : compare_reports(with_acc(40), with_acc(40))) EXPECT_EQ(d.delta, 0.0) << d.metric;
}

TEST(Compare, MismatchRejected) {
  EXPECT_THROW(compare_reports(with_acc(1, "es"), with_acc(2, "fr")), Error);
  auto other = with_acc(2);
  other.system_id = "other";
  EXPECT_THROW(compare_reports(with_acc(1), other), Error);
}

TEST(Table, OneRowPerReport) {
  const auto table = format_table({with_acc(53.1), with_acc(37.7, "ru")});
  EXPECT_NE(table.find("53.1"), std::string::npos);
  EXPECT_NE(table.find("37.7"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
}

}  // namespace
}  // namespace mtgb::metrics
