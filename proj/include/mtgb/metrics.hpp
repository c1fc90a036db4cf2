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
#include <vector>

#include "mtgb/pipeline.hpp"

// Acc, the male/female F1 gap and the pro/anti-stereotypical F1 gap over one
// (system, language) run.
namespace mtgb::metrics {

struct ClassScores {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Precision, recall and F1 from counts; 0 where a denominator is 0.
ClassScores make_scores(std::size_t tp, std::size_t fp, std::size_t fn);

struct ReportCounts {
  std::size_t total = 0;
  std::size_t evaluated = 0;
  std::size_t unknown = 0;  // evaluated records predicted unknown (or neutral)
  std::size_t translation_failed = 0;
  std::size_t alignment_dropped = 0;
  std::size_t fixed_gender = 0;
  std::size_t neutral_gold = 0;
};

struct EvaluationReport {
  std::string system_id;
  std::string language;
  double acc = 0;      // percent
  double delta_g = 0;  // F1(male) - F1(female), percentage points
  double delta_s = 0;  // macro-F1(pro) - macro-F1(anti), percentage points
  ClassScores male;
  ClassScores female;
  double pro_macro_f1 = 0;   // in [0,1]
  double anti_macro_f1 = 0;  // in [0,1]
  ReportCounts counts;
};

// Mean of male and female F1 over `records` that are evaluable. 0 when none is.
double macro_f1(const std::vector<pipeline::PredictionRecord>& records);

// Throws mtgb::Error when the evaluated population is empty or the records
// mix systems or languages.
EvaluationReport compute_report(const std::vector<pipeline::PredictionRecord>& records);

struct MetricDelta {
  std::string metric;
  double a = 0;
  double b = 0;
  double delta = 0;  // b - a
};

// Throws mtgb::Error when system or language differ.
std::vector<MetricDelta> compare_reports(const EvaluationReport& a, const EvaluationReport& b);
std::string format_deltas(const std::vector<MetricDelta>& deltas);

std::string to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);

// Aligned columns, one row per report: language, system, Acc, ΔG, ΔS.
std::string format_table(const std::vector<EvaluationReport>& reports);

}  // namespace mtgb::metrics
