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
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtgb/language.hpp"
#include "mtgb/mt_clients.hpp"

// Word alignment of English source sentences against their automatic
// translations: lexical translation table with a diagonal-favoring distortion
// prior and a null word, trained by EM, decoded per target token.
namespace mtgb::align {

struct TokenizedPair {
  std::string pair_id;
  std::vector<std::string> source_tokens;   // lowercased
  std::vector<std::string> target_tokens;   // lowercased
  std::vector<std::string> target_surface;  // original case, same length as target_tokens

  bool trainable() const { return !source_tokens.empty() && !target_tokens.empty(); }
};

struct TokenizedBitext {
  std::vector<TokenizedPair> pairs;
  std::size_t excluded = 0;  // records dropped for failed or empty translations
};

std::vector<std::string> tokenize_source(std::string_view sentence);
// Original-case target tokens. French and Italian elisions are split off.
std::vector<std::string> tokenize_target(std::string_view sentence, const LanguageCode& language);
std::string fold_token(std::string_view token);

TokenizedBitext tokenize_pairs(const std::vector<mt::TranslationRecord>& records);

struct AlignerConfig {
  int iterations = 5;
  double diagonal_tension = 4.0;
  double null_probability = 0.08;
  bool optimize_tension = true;
  int tension_steps = 8;

  // Throws mtgb::Error when a field is out of range.
  void validate() const;
};

// Distortion prior: target position j of m is drawn toward source position i
// of n with weight exp(-tension * |(i+1)/n - (j+1)/m|).
namespace diagonal {

double deviation(std::size_t i, std::size_t n, std::size_t j, std::size_t m);
double log_normalizer(std::size_t j, std::size_t m, std::size_t n, double tension);
// Mean deviation of target position j under the (non-null) prior.
double expected_deviation(std::size_t j, std::size_t m, std::size_t n, double tension);
// d/d tension of expected_deviation; equals minus the prior variance.
double expected_deviation_derivative(std::size_t j, std::size_t m, std::size_t n, double tension);

struct Shape {
  std::size_t source_len;
  std::size_t target_len;
};

// Sums over every target position of every shape.
double corpus_expected_deviation(const std::vector<Shape>& shapes, double tension);
double corpus_expected_deviation_derivative(const std::vector<Shape>& shapes, double tension);

}  // namespace diagonal

class AlignmentModel {
 public:
  static constexpr std::uint32_t kNullWord = 0;
  static constexpr std::string_view kNullToken = "<null>";

  AlignmentModel();

  double tension() const noexcept { return tension_; }
  double null_probability() const noexcept { return null_probability_; }

  // t(target | source); 0 for unseen pairs. Pass kNullToken for the null word.
  double prob(std::string_view source, std::string_view target) const;
  // Sum of t(. | source) over stored entries.
  double row_sum(std::string_view source) const;
  // Target word with the highest t(. | source); empty if the row is empty.
  std::string best_translation(std::string_view source) const;

  std::size_t source_vocab_size() const { return source_words_.size(); }
  std::size_t target_vocab_size() const { return target_words_.size(); }
  const std::vector<std::string>& source_words() const { return source_words_; }

  // Corpus log-likelihood recorded at each EM iteration's E-step (the value
  // for the parameters entering that iteration).
  const std::vector<double>& training_log_likelihoods() const { return log_likelihoods_; }
  const std::vector<double>& training_tensions() const { return tensions_; }

  // TSV dump: a header line, then `source <TAB> target <TAB> prob` sorted.
  std::string to_tsv() const;
  static AlignmentModel from_tsv(std::string_view tsv);

 private:
  friend AlignmentModel train(const std::vector<TokenizedPair>&, const AlignerConfig&);

  std::uint32_t intern_source(const std::string& w);
  std::uint32_t intern_target(const std::string& w);

  std::unordered_map<std::string, std::uint32_t> source_ids_;
  std::unordered_map<std::string, std::uint32_t> target_ids_;
  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::vector<std::unordered_map<std::uint32_t, double>> table_;
  double tension_ = 4.0;
  double null_probability_ = 0.08;
  std::vector<double> log_likelihoods_;
  std::vector<double> tensions_;
};

// Throws BatchError when no pair is trainable.
AlignmentModel train(const std::vector<TokenizedPair>& pairs, const AlignerConfig& config);

// Log-likelihood of the target sides given the sources under `model`.
double corpus_log_likelihood(const AlignmentModel& model, const std::vector<TokenizedPair>& pairs);

struct Link {
  std::size_t source;
  std::size_t target;

  auto operator<=>(const Link&) const = default;
};

struct Alignment {
  std::string pair_id;
  std::vector<Link> links;  // sorted by target index; each target at most once

  std::vector<std::size_t> targets_of(std::size_t source) const;
  std::string to_pharaoh() const;
};

Alignment viterbi_align(const AlignmentModel& model, const TokenizedPair& pair);

// Parses one Pharaoh line ("0-0 1-2"). Throws mtgb::Error on bad syntax.
std::vector<Link> parse_pharaoh(std::string_view line);

}  // namespace mtgb::align
