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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// The challenge set: WinoGender and WinoBias sentences with an annotated
// entity, its gold gender and a stereotype label.
namespace mtgb::corpus {

enum class Gender { Male, Female, Neutral };
enum class Stereotype { Pro, Anti, Neutral };
enum class SourceDataset { WinoGender, WinoBias };

std::string_view to_string(Gender g);
std::string_view to_string(Stereotype s);
std::string_view to_string(SourceDataset d);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<Stereotype> parse_stereotype(std::string_view s);
std::optional<SourceDataset> parse_dataset(std::string_view s);

struct ChallengeInstance {
  std::string id;
  std::string sentence;
  std::size_t entity_index = 0;  // into text::tokenize(sentence)
  std::string entity_phrase;
  Gender gold_gender = Gender::Neutral;
  Stereotype stereotype = Stereotype::Neutral;
  SourceDataset source_dataset = SourceDataset::WinoBias;

  bool operator==(const ChallengeInstance&) const = default;
};

// Throws mtgb::Error naming the violated invariant when `inst` is invalid.
void validate(const ChallengeInstance& inst);

struct CorpusStats {
  // counts[dataset][gender]
  std::array<std::array<std::size_t, 3>, 2> counts{};
  std::size_t total = 0;

  std::size_t count(SourceDataset d, Gender g) const {
    return counts[static_cast<std::size_t>(d)][static_cast<std::size_t>(g)];
  }
  std::size_t dataset_total(SourceDataset d) const;
  std::size_t gender_total(Gender g) const;

  CorpusStats& operator+=(const CorpusStats& other);
  bool operator==(const CorpusStats&) const = default;
};

// Native TSV, one instance per line, no header:
//   id  source_dataset  gold_gender  stereotype  entity_index  entity_phrase  sentence
std::vector<ChallengeInstance> load_challenge_set(const std::string& path);
std::vector<ChallengeInstance> parse_challenge_set(const std::vector<std::string>& lines);
std::string serialize_challenge_set(const std::vector<ChallengeInstance>& instances);
void save_challenge_set(const std::string& path, const std::vector<ChallengeInstance>& instances);

CorpusStats corpus_stats(const std::vector<ChallengeInstance>& instances);

// Aligned text table in the layout of the usual corpus-statistics table:
// rows Male/Female/Neutral/Total, columns WinoGender/WinoBias/combined.
std::string format_stats(const CorpusStats& stats);

inline constexpr std::string_view kInjectedSuffix = "#adj";
inline constexpr std::string_view kMaleAdjective = "handsome";
inline constexpr std::string_view kFemaleAdjective = "pretty";

// Prepends "handsome"/"pretty" to male/female entities. Neutral instances
// pass through unchanged. Throws if any id already carries the suffix.
std::vector<ChallengeInstance> inject_adjectives(const std::vector<ChallengeInstance>& instances);
bool is_injected(const ChallengeInstance& inst);

// Occupation -> majority gender (US labor statistics), used to label
// WinoGender stereotypes. File format: `occupation <TAB> male|female`, '#'
// comments allowed.
using OccupationMajority = std::map<std::string, Gender, std::less<>>;
OccupationMajority load_occupation_majority(const std::string& path);

// Converters from the upstream releases. See README for the column mappings.
std::vector<ChallengeInstance> ingest_winobias(const std::string& path, Stereotype stereotype,
                                               std::string_view id_prefix);
std::vector<ChallengeInstance> ingest_winogender(const std::string& path, const OccupationMajority& majority);
// Aggregated `gender <TAB> word_index <TAB> sentence <TAB> entity` files; the
// word index counts plain whitespace-separated words.
std::vector<ChallengeInstance> ingest_aggregate(const std::string& path, SourceDataset dataset,
                                                const std::vector<std::string>& pro_lines,
                                                const std::vector<std::string>& anti_lines,
                                                std::string_view id_prefix);

}  // namespace mtgb::corpus
