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

#include "mtgb/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::pipeline {

namespace {

const std::string kModule = "pipeline";

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kSourceDeterminers[] = {"the", "a", "an", "this", "that"};

// Source tokens walked back over when the head noun has no link: room for the
// determiner and one or two adjectives.
constexpr std::size_t kFallbackReach = 3;

template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  for (std::size_t w = 0; w < workers; ++w)
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
}

void check_same_order(const std::vector<corpus::ChallengeInstance>& instances,
                      const std::vector<mt::TranslationRecord>& translations,
                      const std::vector<align::Alignment>& alignments) {
  if (instances.size() != translations.size() || instances.size() != alignments.size())
    throw Error(kModule, fmt::format("size mismatch: {} instances, {} translations, {} alignments",
                                     instances.size(), translations.size(), alignments.size()));
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].id != translations[i].instance_id)
      throw Error(kModule, fmt::format("translation {} is for '{}', expected '{}'", i,
                                       translations[i].instance_id, instances[i].id));
}

PredictionRecord predict_one(const corpus::ChallengeInstance& inst, const mt::TranslationRecord& rec,
                             const align::Alignment& alignment, const morph::GenderLexicon& lexicon) {
  PredictionRecord out;
  out.instance_id = inst.id;
  out.system_id = rec.system_id;
  out.language = rec.language;
  out.gold_gender = inst.gold_gender;
  out.stereotype = inst.stereotype;
  out.evidence.language = rec.language;
  if (!rec.ok()) {
    out.status = Status::TranslationFailed;
    return out;
  }
  out.target_tokens = align::tokenize_target(rec.target, rec.language);
  out.entity_target_indices = entity_target_indices(inst, alignment);
  if (out.entity_target_indices.empty()) {
    out.status = Status::AlignmentDropped;
    return out;
  }
  out.evidence = morph::extract_gender(rec.language, out.target_tokens, out.entity_target_indices, lexicon);
  out.predicted = out.evidence.verdict;
  out.status = out.evidence.fixed_gender ? Status::FixedGender : Status::Ok;
  return out;
}

ordered_json record_json(const PredictionRecord& r) {
  ordered_json evidence = ordered_json::array();
  for (const auto& e : r.evidence.evidence) {
    ordered_json item;
    item["kind"] = to_string(e.kind);
    item["token"] = e.token;
    item["token_index"] = e.token_index;
    item["verdict"] = to_string(e.verdict);
    item["weak"] = e.weak;
    item["fixed_gender"] = e.fixed_gender;
    evidence.push_back(std::move(item));
  }
  ordered_json j;
  j["instance_id"] = r.instance_id;
  j["system_id"] = r.system_id;
  j["language"] = r.language.str();
  j["gold_gender"] = corpus::to_string(r.gold_gender);
  j["stereotype"] = corpus::to_string(r.stereotype);
  j["predicted"] = to_string(r.predicted);
  j["evidence"] = {{"verdict", to_string(r.evidence.verdict)},
                   {"language", r.evidence.language.str()},
                   {"fixed_gender", r.evidence.fixed_gender},
                   {"items", std::move(evidence)}};
  j["entity_target_indices"] = r.entity_target_indices;
  j["status"] = to_string(r.status);
  j["target_tokens"] = r.target_tokens;
  return j;
}

template <typename T, typename Parse>
T parse_enum(const ordered_json& j, const char* key, Parse parse, std::size_t line) {
  auto v = parse(j.at(key).get<std::string>());
  if (!v) throw ParseError(kModule, line, fmt::format("bad {} '{}'", key, j.at(key).get<std::string>()));
  return *v;
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::TranslationFailed: return "translation_failed";
    case Status::AlignmentDropped: return "alignment_dropped";
    case Status::FixedGender: return "fixed_gender";
  }
  return "ok";
}

std::optional<Status> parse_status(std::string_view s) {
  for (Status st : {Status::Ok, Status::TranslationFailed, Status::AlignmentDropped, Status::FixedGender})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

AlignmentRun align_records(const std::vector<mt::TranslationRecord>& records, const align::AlignerConfig& config,
                           const std::vector<align::TokenizedPair>& extra_training) {
  auto bitext = align::tokenize_pairs(records);
  std::vector<align::TokenizedPair> training = bitext.pairs;
  training.insert(training.end(), extra_training.begin(), extra_training.end());

  AlignmentRun run{align::train(training, config), {}, bitext.excluded};
  run.alignments.resize(records.size());
  std::size_t next_pair = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    run.alignments[i].pair_id = records[i].instance_id;
    if (next_pair < bitext.pairs.size() && bitext.pairs[next_pair].pair_id == records[i].instance_id) {
      run.alignments[i] = align::viterbi_align(run.model, bitext.pairs[next_pair]);
      ++next_pair;
    }
  }
  return run;
}

std::vector<std::size_t> entity_target_indices(const corpus::ChallengeInstance& instance,
                                               const align::Alignment& alignment) {
  auto linked = alignment.targets_of(instance.entity_index);
  if (!linked.empty()) return linked;
  const auto source = align::tokenize_source(instance.sentence);
  for (std::size_t back = 1; back <= kFallbackReach && back <= instance.entity_index; ++back) {
    const std::size_t k = instance.entity_index - back;
    linked = alignment.targets_of(k);
    if (!linked.empty()) return linked;
    if (std::find(std::begin(kSourceDeterminers), std::end(kSourceDeterminers), source[k]) !=
        std::end(kSourceDeterminers))
      break;
  }
  return {};
}

std::vector<PredictionRecord> extract_predictions(const std::vector<corpus::ChallengeInstance>& instances,
                                                  const std::vector<mt::TranslationRecord>& translations,
                                                  const std::vector<align::Alignment>& alignments,
                                                  const morph::GenderLexicon& lexicon, std::size_t jobs) {
  check_same_order(instances, translations, alignments);
  std::vector<PredictionRecord> out(instances.size());
  parallel_for(instances.size(), jobs,
               [&](std::size_t i) { out[i] = predict_one(instances[i], translations[i], alignments[i], lexicon); });
  return out;
}

PipelineResult run_pipeline(const std::vector<corpus::ChallengeInstance>& instances, mt::TranslatorBackend& backend,
                            const LanguageCode& language, std::string_view system_id,
                            const align::AlignerConfig& aligner_config, const morph::GenderLexicon& lexicon,
                            std::size_t jobs) {
  PipelineResult result;
  result.translations = mt::translate_corpus(instances, backend, language, system_id, jobs);
  result.alignment = align_records(result.translations, aligner_config);
  result.predictions =
      extract_predictions(instances, result.translations, result.alignment.alignments, lexicon, jobs);
  return result;
}

std::string serialize_alignments(const std::vector<align::Alignment>& alignments) {
  std::string out;
  for (const auto& a : alignments) out += a.to_pharaoh() + "\n";
  return out;
}

std::vector<align::Alignment> parse_alignments(const std::vector<std::string>& lines,
                                               const std::vector<mt::TranslationRecord>& records) {
  if (lines.size() != records.size())
    throw Error(kModule, fmt::format("alignment file has {} lines for {} records", lines.size(), records.size()));
  std::vector<align::Alignment> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i].pair_id = records[i].instance_id;
    try {
      out[i].links = align::parse_pharaoh(lines[i]);
    } catch (const Error& e) {
      throw ParseError(kModule, i + 1, e.what());
    }
    if (out[i].links.empty()) continue;
    if (!records[i].ok()) throw ParseError(kModule, i + 1, "links given for a failed translation");
    const auto n = align::tokenize_source(records[i].source).size();
    const auto m = align::tokenize_target(records[i].target, records[i].language).size();
    std::sort(out[i].links.begin(), out[i].links.end(),
              [](const align::Link& a, const align::Link& b) { return a.target < b.target; });
    for (std::size_t k = 0; k < out[i].links.size(); ++k) {
      const auto& l = out[i].links[k];
      if (l.source >= n || l.target >= m)
        throw ParseError(kModule, i + 1, fmt::format("link {}-{} out of range ({}x{})", l.source, l.target, n, m));
      if (k > 0 && out[i].links[k - 1].target == l.target)
        throw ParseError(kModule, i + 1, fmt::format("target {} linked twice", l.target));
    }
  }
  return out;
}

std::string to_jsonl(const std::vector<PredictionRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_json(r).dump(-1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
  return out;
}

std::vector<PredictionRecord> parse_jsonl(const std::vector<std::string>& lines) {
  std::vector<PredictionRecord> out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    try {
      auto j = ordered_json::parse(lines[n]);
      PredictionRecord r;
      r.instance_id = j.at("instance_id").get<std::string>();
      r.system_id = j.at("system_id").get<std::string>();
      r.language = LanguageCode(j.at("language").get<std::string>());
      r.gold_gender = parse_enum<corpus::Gender>(j, "gold_gender", corpus::parse_gender, n + 1);
      r.stereotype = parse_enum<corpus::Stereotype>(j, "stereotype", corpus::parse_stereotype, n + 1);
      r.predicted = parse_enum<morph::PredictedGender>(j, "predicted", morph::parse_predicted_gender, n + 1);
      r.status = parse_enum<Status>(j, "status", parse_status, n + 1);
      const auto& ev = j.at("evidence");
      r.evidence.verdict = parse_enum<morph::PredictedGender>(ev, "verdict", morph::parse_predicted_gender, n + 1);
      r.evidence.language = LanguageCode(ev.at("language").get<std::string>());
      r.evidence.fixed_gender = ev.at("fixed_gender").get<bool>();
      for (const auto& item : ev.at("items")) {
        morph::GenderEvidence e;
        const auto kind = item.at("kind").get<std::string>();
        if (kind == "lexicon") e.kind = morph::EvidenceKind::Lexicon;
        else if (kind == "determiner") e.kind = morph::EvidenceKind::Determiner;
        else if (kind == "suffix") e.kind = morph::EvidenceKind::Suffix;
        else throw ParseError(kModule, n + 1, fmt::format("bad evidence kind '{}'", kind));
        e.token = item.at("token").get<std::string>();
        e.token_index = item.at("token_index").get<std::size_t>();
        e.verdict = parse_enum<morph::PredictedGender>(item, "verdict", morph::parse_predicted_gender, n + 1);
        e.weak = item.at("weak").get<bool>();
        e.fixed_gender = item.at("fixed_gender").get<bool>();
        r.evidence.evidence.push_back(std::move(e));
      }
      r.entity_target_indices = j.at("entity_target_indices").get<std::vector<std::size_t>>();
      r.target_tokens = j.at("target_tokens").get<std::vector<std::string>>();
      out.push_back(std::move(r));
    } catch (const ordered_json::exception& e) {
      throw ParseError(kModule, n + 1, e.what());
    }
  }
  return out;
}

StatusCounts count_statuses(const std::vector<PredictionRecord>& records) {
  StatusCounts c;
  for (const auto& r : records) {
    switch (r.status) {
      case Status::Ok: ++c.ok; break;
      case Status::TranslationFailed: ++c.translation_failed; break;
      case Status::AlignmentDropped: ++c.alignment_dropped; break;
      case Status::FixedGender: ++c.fixed_gender; break;
    }
  }
  return c;
}

}  // namespace mtgb::pipeline
