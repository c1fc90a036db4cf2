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

#include "naive_scorer.hpp"

namespace mtgb::testing {

namespace {

// F1 as 2tp / (2tp + fp + fn), 0 when there is nothing to score.
double f1(double tp, double fp, double fn) {
  const double denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2 * tp / denom;
}

struct Tally {
  double n = 0, right = 0;
  double m_tp = 0, m_fp = 0, m_fn = 0;
  double f_tp = 0, f_fp = 0, f_fn = 0;
};

Tally tally(const std::vector<pipeline::PredictionRecord>& records, int stereotype_filter) {
  Tally t;
  for (const auto& r : records) {
    if (r.status != pipeline::Status::Ok) continue;
    const int gold = r.gold_gender == corpus::Gender::Male ? 1 : r.gold_gender == corpus::Gender::Female ? 2 : 0;
    if (gold == 0) continue;
    if (stereotype_filter >= 0 && static_cast<int>(r.stereotype) != stereotype_filter) continue;
    const int pred = r.predicted == morph::PredictedGender::Masculine ? 1
                     : r.predicted == morph::PredictedGender::Feminine ? 2
                                                                        : 0;
    t.n += 1;
    if (pred == gold) t.right += 1;
    // male as positive class
    if (gold == 1 && pred == 1) t.m_tp += 1;
    if (gold != 1 && pred == 1) t.m_fp += 1;
    if (gold == 1 && pred != 1) t.m_fn += 1;
    // female as positive class
    if (gold == 2 && pred == 2) t.f_tp += 1;
    if (gold != 2 && pred == 2) t.f_fp += 1;
    if (gold == 2 && pred != 2) t.f_fn += 1;
  }
  return t;
}

double macro(const Tally& t) {
  if (t.n == 0) return 0;
  return 0.5 * (f1(t.m_tp, t.m_fp, t.m_fn) + f1(t.f_tp, t.f_fp, t.f_fn));
}

}  // namespace

std::optional<NaiveScores> naive_score(const std::vector<pipeline::PredictionRecord>& records) {
  const Tally all = tally(records, -1);
  if (all.n == 0) return std::nullopt;
  NaiveScores s;
  s.acc = 100 * all.right / all.n;
  s.delta_g = 100 * (f1(all.m_tp, all.m_fp, all.m_fn) - f1(all.f_tp, all.f_fp, all.f_fn));
  s.delta_s = 100 * (macro(tally(records, static_cast<int>(corpus::Stereotype::Pro))) -
                     macro(tally(records, static_cast<int>(corpus::Stereotype::Anti))));
  return s;
}

}  // namespace mtgb::testing
