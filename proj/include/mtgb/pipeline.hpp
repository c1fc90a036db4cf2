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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtgb/aligner.hpp"
#include "mtgb/corpus.hpp"
#include "mtgb/language.hpp"
#include "mtgb/morphology.hpp"
#include "mtgb/mt_clients.hpp"

// Translate, align, map the entity and extract its gender, one record per
// challenge instance.
namespace mtgb::pipeline {

enum class Status { Ok, TranslationFailed, AlignmentDropped, FixedGender };

std::string_view to_string(Status s);
std::optional<Status> parse_status(std::string_view s);

struct PredictionRecord {
  std::string instance_id;
  std::string system_id;
  LanguageCode language{"es"};
  corpus::Gender gold_gender = corpus::Gender::Neutral;
  corpus::Stereotype stereotype = corpus::Stereotype::Neutral;
  morph::PredictedGender predicted = morph::PredictedGender::Unknown;
  morph::GenderCall evidence;
  std::vector<std::size_t> entity_target_indices;  // sorted
  Status status = Status::TranslationFailed;
  // Original-case target tokens, so a validation sheet can show the span.
  std::vector<std::string> target_tokens;
};

// One Viterbi alignment per record, record order. Records without a usable
// translation get an empty alignment.
struct AlignmentRun {
  align::AlignmentModel model;
  std::vector<align::Alignment> alignments;
  std::size_t excluded = 0;
};

// Trains on `records` plus `extra_training` (pooling across systems), then
// aligns `records`. Throws BatchError when nothing is trainable.
AlignmentRun align_records(const std::vector<mt::TranslationRecord>& records, const align::AlignerConfig& config,
                           const std::vector<align::TokenizedPair>& extra_training = {});

// Target tokens linked to the entity's source token. When it has none, walks
// back over the preceding tokens (adjectives) up to and including the
// determiner and takes the first linked one. Empty when nothing is linked.
std::vector<std::size_t> entity_target_indices(const corpus::ChallengeInstance& instance,
                                               const align::Alignment& alignment);

// Steps after alignment. All three lists are in the same instance order.
std::vector<PredictionRecord> extract_predictions(const std::vector<corpus::ChallengeInstance>& instances,
                                                  const std::vector<mt::TranslationRecord>& translations,
                                                  const std::vector<align::Alignment>& alignments,
                                                  const morph::GenderLexicon& lexicon, std::size_t jobs = 1);

struct PipelineResult {
  std::vector<mt::TranslationRecord> translations;
  AlignmentRun alignment;
  std::vector<PredictionRecord> predictions;
};

PipelineResult run_pipeline(const std::vector<corpus::ChallengeInstance>& instances, mt::TranslatorBackend& backend,
                            const LanguageCode& language, std::string_view system_id,
                            const align::AlignerConfig& aligner_config, const morph::GenderLexicon& lexicon,
                            std::size_t jobs = 1);

// Pharaoh file with one line per record; an excluded record is an empty line.
std::string serialize_alignments(const std::vector<align::Alignment>& alignments);
std::vector<align::Alignment> parse_alignments(const std::vector<std::string>& lines,
                                               const std::vector<mt::TranslationRecord>& records);

// JSON Lines with a fixed key order.
std::string to_jsonl(const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> parse_jsonl(const std::vector<std::string>& lines);

struct StatusCounts {
  std::size_t ok = 0;
  std::size_t translation_failed = 0;
  std::size_t alignment_dropped = 0;
  std::size_t fixed_gender = 0;

  std::size_t total() const { return ok + translation_failed + alignment_dropped + fixed_gender; }
};

StatusCounts count_statuses(const std::vector<PredictionRecord>& records);

}  // namespace mtgb::pipeline
