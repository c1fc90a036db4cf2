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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mtgb/pipeline.hpp"

// Human validation: sample predictions into an annotation sheet, read the
// filled sheets back, and measure agreement.
namespace mtgb::validation {

struct SheetRow {
  std::string instance_id;
  std::string target_sentence;  // target tokens joined by single spaces
  std::size_t span_begin = 0;   // half-open token range [begin, end)
  std::size_t span_end = 0;
  std::string gender;           // blank, or masculine|feminine|neutral|unknown

  bool operator==(const SheetRow&) const = default;
};

struct AnnotationSheet {
  std::string system_id;
  std::string language;
  std::uint64_t seed = 0;
  std::vector<SheetRow> rows;
};

inline constexpr std::size_t kDefaultSampleSize = 100;

// Uniform sample without replacement of records with status ok, in draw
// order. Throws mtgb::Error naming the available count when n is too large.
AnnotationSheet sample_for_validation(const std::vector<pipeline::PredictionRecord>& records, std::size_t n,
                                      std::uint64_t seed);

// Index in [0, bound) from `state`, by rejection so every value is equally
// likely. Exposed for tests.
std::uint64_t bounded_draw(std::uint64_t bound, std::uint64_t (*next)(void*), void* state);

std::string to_csv(const std::vector<SheetRow>& rows);
std::vector<SheetRow> parse_csv(std::string_view csv);
std::string sidecar_json(const AnnotationSheet& sheet);

// `path` is the CSV; metadata goes to `path + ".json"`.
void save_sheet(const std::string& path, const AnnotationSheet& sheet);
// The sidecar is optional; without it only the rows are filled in.
AnnotationSheet load_sheet(const std::string& path);

struct AgreementReport {
  double human_vs_auto = 0;    // percent
  double inter_annotator = 0;  // percent
  std::size_t n = 0;           // sheet rows
  std::size_t blank_labels = 0;
  std::vector<std::string> disagreements;  // sheet order
};

// Throws mtgb::Error when an annotation file or the predictions lack a sheet
// id, or a label is not one of the four gender values.
AgreementReport compute_agreement(const AnnotationSheet& sheet, const std::vector<SheetRow>& annotations_a,
                                  const std::vector<SheetRow>& annotations_b,
                                  const std::vector<pipeline::PredictionRecord>& predictions);

std::string to_json(const AgreementReport& report);

// Terminal labeling: shows each unlabeled row with the entity in brackets and
// reads m/f/n/u, empty to skip, q to stop. Returns the rows with labels set.
std::vector<SheetRow> annotate_interactive(std::vector<SheetRow> rows, std::istream& in, std::ostream& out);

}  // namespace mtgb::validation
