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

#include "mtgb/metrics.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "mtgb/error.hpp"

namespace mtgb::metrics {

namespace {

const std::string kModule = "metrics";

using pipeline::PredictionRecord;
using pipeline::Status;
using corpus::Gender;
using morph::PredictedGender;

bool evaluable(const PredictionRecord& r) {
  return r.status == Status::Ok && (r.gold_gender == Gender::Male || r.gold_gender == Gender::Female);
}

struct Confusion {
  std::size_t male_tp = 0, male_fp = 0, male_fn = 0;
  std::size_t female_tp = 0, female_fp = 0, female_fn = 0;
  std::size_t evaluated = 0, correct = 0, unknown = 0;
};

// Each gender is the positive class in turn. Neutral and unknown predictions
// are misses for the gold class and false alarms for neither.
Confusion confusion(const std::vector<PredictionRecord>& records) {
  Confusion c;
  for (const auto& r : records) {
    if (!evaluable(r)) continue;
    ++c.evaluated;
    const bool gold_male = r.gold_gender == Gender::Male;
    const bool pred_male = r.predicted == PredictedGender::Masculine;
    const bool pred_female = r.predicted == PredictedGender::Feminine;
    if (!pred_male && !pred_female) ++c.unknown;
    if (gold_male) {
      if (pred_male) {
        ++c.male_tp;
        ++c.correct;
      } else {
        ++c.male_fn;
        if (pred_female) ++c.female_fp;
      }
    } else {
      if (pred_female) {
        ++c.female_tp;
        ++c.correct;
      } else {
        ++c.female_fn;
        if (pred_male) ++c.male_fp;
      }
    }
  }
  return c;
}

std::vector<PredictionRecord> subset(const std::vector<PredictionRecord>& records, corpus::Stereotype s) {
  std::vector<PredictionRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [s](const PredictionRecord& r) { return r.stereotype == s; });
  return out;
}

nlohmann::ordered_json scores_json(const ClassScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}};
}

ClassScores scores_from_json(const nlohmann::json& j) {
  ClassScores s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.f1 = j.at("f1").get<double>();
  s.tp = j.at("tp").get<std::size_t>();
  s.fp = j.at("fp").get<std::size_t>();
  s.fn = j.at("fn").get<std::size_t>();
  return s;
}

}  // namespace

ClassScores make_scores(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScores s{tp, fp, fn, 0, 0, 0};
  if (tp + fp > 0) s.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double macro_f1(const std::vector<PredictionRecord>& records) {
  const auto c = confusion(records);
  if (c.evaluated == 0) return 0;
  return (make_scores(c.male_tp, c.male_fp, c.male_fn).f1 + make_scores(c.female_tp, c.female_fp, c.female_fn).f1) /
         2;
}

EvaluationReport compute_report(const std::vector<PredictionRecord>& records) {
  EvaluationReport report;
  std::set<std::pair<std::string, std::string>> runs;
  for (const auto& r : records) runs.emplace(r.system_id, r.language.str());
  if (runs.size() > 1) throw Error(kModule, "records mix several systems or languages");
  if (!runs.empty()) std::tie(report.system_id, report.language) = *runs.begin();

  auto& counts = report.counts;
  counts.total = records.size();
  for (const auto& r : records) {
    if (r.gold_gender == Gender::Neutral) {
      ++counts.neutral_gold;
      continue;
    }
    switch (r.status) {
      case Status::TranslationFailed: ++counts.translation_failed; break;
      case Status::AlignmentDropped: ++counts.alignment_dropped; break;
      case Status::FixedGender: ++counts.fixed_gender; break;
      case Status::Ok: break;
    }
  }

  const auto c = confusion(records);
  counts.evaluated = c.evaluated;
  counts.unknown = c.unknown;
  if (c.evaluated == 0) throw Error(kModule, "no evaluable records (gendered gold with status ok)");

  report.male = make_scores(c.male_tp, c.male_fp, c.male_fn);
  report.female = make_scores(c.female_tp, c.female_fp, c.female_fn);
  report.acc = 100.0 * static_cast<double>(c.correct) / static_cast<double>(c.evaluated);
  report.delta_g = 100.0 * (report.male.f1 - report.female.f1);
  report.pro_macro_f1 = macro_f1(subset(records, corpus::Stereotype::Pro));
  report.anti_macro_f1 = macro_f1(subset(records, corpus::Stereotype::Anti));
  report.delta_s = 100.0 * (report.pro_macro_f1 - report.anti_macro_f1);
  return report;
}

std::vector<MetricDelta> compare_reports(const EvaluationReport& a, const EvaluationReport& b) {
  if (a.language != b.language)
    throw Error(kModule, fmt::format("language mismatch: '{}' vs '{}'", a.language, b.language));
  if (a.system_id != b.system_id)
    throw Error(kModule, fmt::format("system mismatch: '{}' vs '{}'", a.system_id, b.system_id));
  auto row = [](std::string name, double x, double y) { return MetricDelta{std::move(name), x, y, y - x}; };
  return {row("acc", a.acc, b.acc), row("delta_g", a.delta_g, b.delta_g), row("delta_s", a.delta_s, b.delta_s),
          row("male_f1", 100 * a.male.f1, 100 * b.male.f1), row("female_f1", 100 * a.female.f1, 100 * b.female.f1),
          row("unknown", static_cast<double>(a.counts.unknown), static_cast<double>(b.counts.unknown))};
}

std::string format_deltas(const std::vector<MetricDelta>& deltas) {
  std::string out = fmt::format("{:<10} {:>8} {:>8} {:>8}\n", "metric", "a", "b", "delta");
  for (const auto& d : deltas) out += fmt::format("{:<10} {:>8.1f} {:>8.1f} {:>+8.1f}\n", d.metric, d.a, d.b, d.delta);
  return out;
}

std::string to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["system_id"] = r.system_id;
  j["language"] = r.language;
  j["acc"] = r.acc;
  j["delta_g"] = r.delta_g;
  j["delta_s"] = r.delta_s;
  j["male"] = scores_json(r.male);
  j["female"] = scores_json(r.female);
  j["pro_macro_f1"] = r.pro_macro_f1;
  j["anti_macro_f1"] = r.anti_macro_f1;
  j["counts"] = {{"total", r.counts.total},
                 {"evaluated", r.counts.evaluated},
                 {"unknown", r.counts.unknown},
                 {"translation_failed", r.counts.translation_failed},
                 {"alignment_dropped", r.counts.alignment_dropped},
                 {"fixed_gender", r.counts.fixed_gender},
                 {"neutral_gold", r.counts.neutral_gold}};
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& json_text) {
  try {
    auto j = nlohmann::json::parse(json_text);
    EvaluationReport r;
    r.system_id = j.at("system_id").get<std::string>();
    r.language = j.at("language").get<std::string>();
    r.acc = j.at("acc").get<double>();
    r.delta_g = j.at("delta_g").get<double>();
    r.delta_s = j.at("delta_s").get<double>();
    r.male = scores_from_json(j.at("male"));
    r.female = scores_from_json(j.at("female"));
    r.pro_macro_f1 = j.at("pro_macro_f1").get<double>();
    r.anti_macro_f1 = j.at("anti_macro_f1").get<double>();
    const auto& c = j.at("counts");
    r.counts.total = c.at("total").get<std::size_t>();
    r.counts.evaluated = c.at("evaluated").get<std::size_t>();
    r.counts.unknown = c.at("unknown").get<std::size_t>();
    r.counts.translation_failed = c.at("translation_failed").get<std::size_t>();
    r.counts.alignment_dropped = c.at("alignment_dropped").get<std::size_t>();
    r.counts.fixed_gender = c.at("fixed_gender").get<std::size_t>();
    r.counts.neutral_gold = c.at("neutral_gold").get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, std::string("malformed report: ") + e.what());
  }
}

std::string format_table(const std::vector<EvaluationReport>& reports) {
  std::size_t system_width = 6;
  for (const auto& r : reports) system_width = std::max(system_width, r.system_id.size());
  std::string out = fmt::format("{:<4} {:<{}} {:>6} {:>6} {:>6} {:>9} {:>7}\n", "lang", "system", system_width, "Acc",
                                "dG", "dS", "evaluated", "unknown");
  for (const auto& r : reports)
    out += fmt::format("{:<4} {:<{}} {:>6.1f} {:>6.1f} {:>6.1f} {:>9} {:>7}\n", r.language, r.system_id,
                       system_width, r.acc, r.delta_g, r.delta_s, r.counts.evaluated, r.counts.unknown);
  return out;
}

}  // namespace mtgb::metrics
