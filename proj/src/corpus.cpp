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

#include "mtgb/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::corpus {

namespace {

constexpr std::string_view kModule = "corpus";

const std::set<std::string, std::less<>>& pronouns() {
  static const std::set<std::string, std::less<>> p{"he", "she", "his", "her", "him", "they", "their", "them"};
  return p;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::string check(const ChallengeInstance& inst) {
  if (inst.id.empty()) return "empty id";
  if (inst.sentence.find_first_of("\t\n\r") != std::string::npos) return "sentence contains tab or newline";
  const auto tokens = text::tokenize(inst.sentence);
  if (inst.entity_index >= tokens.size()) {
    return fmt::format("entity_index {} out of range ({} tokens)", inst.entity_index, tokens.size());
  }
  if (text::to_lower(tokens[inst.entity_index]) != text::to_lower(inst.entity_phrase)) {
    return fmt::format("token {} is '{}', not entity_phrase '{}'", inst.entity_index, tokens[inst.entity_index],
                       inst.entity_phrase);
  }
  const bool has_pronoun = std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) {
    return pronouns().count(text::to_lower(t)) > 0;
  });
  if (!has_pronoun) return "sentence has no pronoun";
  if (inst.gold_gender == Gender::Neutral && inst.stereotype != Stereotype::Neutral) {
    return "gold gender neutral requires stereotype neutral";
  }
  return {};
}

// First tokenizer token starting at or after byte offset `begin`.
std::optional<std::size_t> token_at_offset(const std::vector<text::TokenSpan>& spans, std::size_t begin,
                                           std::size_t limit) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].begin < begin) continue;
    if (spans[i].begin >= limit) return std::nullopt;
    return i;
  }
  return std::nullopt;
}

Gender gender_from_pronoun(std::string_view pronoun) {
  const std::string p = text::to_lower(pronoun);
  if (p == "he" || p == "him" || p == "his" || p == "himself") return Gender::Male;
  if (p == "she" || p == "her" || p == "hers" || p == "herself") return Gender::Female;
  return Gender::Neutral;
}

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male:
      return "male";
    case Gender::Female:
      return "female";
    case Gender::Neutral:
      return "neutral";
  }
  return "neutral";
}

std::string_view to_string(Stereotype s) {
  switch (s) {
    case Stereotype::Pro:
      return "pro";
    case Stereotype::Anti:
      return "anti";
    case Stereotype::Neutral:
      return "neutral";
  }
  return "neutral";
}

std::string_view to_string(SourceDataset d) { return d == SourceDataset::WinoGender ? "winogender" : "winobias"; }

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "male") return Gender::Male;
  if (s == "female") return Gender::Female;
  if (s == "neutral") return Gender::Neutral;
  return std::nullopt;
}

std::optional<Stereotype> parse_stereotype(std::string_view s) {
  if (s == "pro") return Stereotype::Pro;
  if (s == "anti") return Stereotype::Anti;
  if (s == "neutral") return Stereotype::Neutral;
  return std::nullopt;
}

std::optional<SourceDataset> parse_dataset(std::string_view s) {
  if (s == "winogender") return SourceDataset::WinoGender;
  if (s == "winobias") return SourceDataset::WinoBias;
  return std::nullopt;
}

void validate(const ChallengeInstance& inst) {
  if (auto violation = check(inst); !violation.empty()) {
    throw Error(std::string(kModule), "instance '" + inst.id + "': " + violation);
  }
}

std::size_t CorpusStats::dataset_total(SourceDataset d) const {
  const auto& row = counts[static_cast<std::size_t>(d)];
  return row[0] + row[1] + row[2];
}

std::size_t CorpusStats::gender_total(Gender g) const {
  return count(SourceDataset::WinoGender, g) + count(SourceDataset::WinoBias, g);
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  for (std::size_t d = 0; d < 2; ++d) {
    for (std::size_t g = 0; g < 3; ++g) counts[d][g] += other.counts[d][g];
  }
  total += other.total;
  return *this;
}

std::vector<ChallengeInstance> parse_challenge_set(const std::vector<std::string>& lines) {
  std::vector<ChallengeInstance> out;
  out.reserve(lines.size());
  std::unordered_set<std::string> ids;
  const std::string module(kModule);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    const auto cols = text::split(lines[n], '\t');
    if (cols.size() != 7) {
      throw ParseError(module, line_no, fmt::format("expected 7 tab-separated columns, got {}", cols.size()));
    }
    ChallengeInstance inst;
    inst.id = cols[0];
    const auto dataset = parse_dataset(cols[1]);
    if (!dataset) throw ParseError(module, line_no, "bad source_dataset '" + cols[1] + "'");
    const auto gender = parse_gender(cols[2]);
    if (!gender) throw ParseError(module, line_no, "bad gold_gender '" + cols[2] + "'");
    const auto stereotype = parse_stereotype(cols[3]);
    if (!stereotype) throw ParseError(module, line_no, "bad stereotype '" + cols[3] + "'");
    const auto index = parse_index(cols[4]);
    if (!index) throw ParseError(module, line_no, "bad entity_index '" + cols[4] + "'");
    inst.source_dataset = *dataset;
    inst.gold_gender = *gender;
    inst.stereotype = *stereotype;
    inst.entity_index = *index;
    inst.entity_phrase = cols[5];
    inst.sentence = cols[6];
    if (auto violation = check(inst); !violation.empty()) throw ParseError(module, line_no, violation);
    if (!ids.insert(inst.id).second) throw ParseError(module, line_no, "duplicate id '" + inst.id + "'");
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ChallengeInstance> load_challenge_set(const std::string& path) {
  return parse_challenge_set(text::read_lines(path, std::string(kModule)));
}

std::string serialize_challenge_set(const std::vector<ChallengeInstance>& instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", inst.id, to_string(inst.source_dataset),
                       to_string(inst.gold_gender), to_string(inst.stereotype), inst.entity_index,
                       inst.entity_phrase, inst.sentence);
  }
  return out;
}

void save_challenge_set(const std::string& path, const std::vector<ChallengeInstance>& instances) {
  text::write_file(path, serialize_challenge_set(instances), std::string(kModule));
}

CorpusStats corpus_stats(const std::vector<ChallengeInstance>& instances) {
  CorpusStats stats;
  for (const auto& inst : instances) {
    ++stats.counts[static_cast<std::size_t>(inst.source_dataset)][static_cast<std::size_t>(inst.gold_gender)];
    ++stats.total;
  }
  return stats;
}

std::string format_stats(const CorpusStats& stats) {
  std::string out = fmt::format("{:<8} {:>10} {:>10} {:>10}\n", "", "WinoGender", "WinoBias", "combined");
  const std::array<Gender, 3> genders{Gender::Male, Gender::Female, Gender::Neutral};
  const std::array<std::string_view, 3> names{"Male", "Female", "Neutral"};
  for (std::size_t g = 0; g < genders.size(); ++g) {
    out += fmt::format("{:<8} {:>10} {:>10} {:>10}\n", names[g], stats.count(SourceDataset::WinoGender, genders[g]),
                       stats.count(SourceDataset::WinoBias, genders[g]), stats.gender_total(genders[g]));
  }
  out += fmt::format("{:<8} {:>10} {:>10} {:>10}\n", "Total", stats.dataset_total(SourceDataset::WinoGender),
                     stats.dataset_total(SourceDataset::WinoBias), stats.total);
  return out;
}

bool is_injected(const ChallengeInstance& inst) { return text::ends_with(inst.id, kInjectedSuffix); }

std::vector<ChallengeInstance> inject_adjectives(const std::vector<ChallengeInstance>& instances) {
  std::vector<ChallengeInstance> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) {
    if (is_injected(inst)) {
      throw Error(std::string(kModule), "instance '" + inst.id + "' is already adjective-injected");
    }
    if (inst.gold_gender == Gender::Neutral) {
      out.push_back(inst);
      continue;
    }
    validate(inst);
    const auto spans = text::tokenize_spans(inst.sentence);
    const std::string_view adjective = inst.gold_gender == Gender::Male ? kMaleAdjective : kFemaleAdjective;
    ChallengeInstance injected = inst;
    injected.sentence.insert(spans[inst.entity_index].begin, std::string(adjective) + " ");
    injected.entity_index = inst.entity_index + 1;
    injected.id = inst.id + std::string(kInjectedSuffix);
    out.push_back(std::move(injected));
  }
  return out;
}

OccupationMajority load_occupation_majority(const std::string& path) {
  OccupationMajority majority;
  const auto lines = text::read_lines(path, std::string(kModule));
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = text::trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    const auto gender = cols.size() >= 2 ? parse_gender(cols[1]) : std::nullopt;
    if (!gender || *gender == Gender::Neutral) {
      throw ParseError(std::string(kModule), n + 1, "expected 'occupation<TAB>male|female'");
    }
    majority[text::to_lower(cols[0])] = *gender;
  }
  return majority;
}

std::vector<ChallengeInstance> ingest_winobias(const std::string& path, Stereotype stereotype,
                                               std::string_view id_prefix) {
  const std::string module(kModule);
  const auto lines = text::read_lines(path, module);
  std::vector<ChallengeInstance> out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = text::trim(lines[n]);
    if (line.empty()) continue;
    // Leading sentence number.
    const std::size_t space = line.find(' ');
    if (space != std::string_view::npos &&
        std::all_of(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(space),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      line.remove_prefix(space + 1);
    }
    std::string sentence;
    struct Group {
      std::string text;
      std::size_t last_word_begin;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != '[') {
        sentence.push_back(line[i]);
        continue;
      }
      const std::size_t close = line.find(']', i);
      if (close == std::string_view::npos) throw ParseError(module, n + 1, "unbalanced '['");
      const std::string group(line.substr(i + 1, close - i - 1));
      const std::size_t last_space = group.rfind(' ');
      const std::size_t last_word = last_space == std::string::npos ? 0 : last_space + 1;
      groups.push_back({group, sentence.size() + last_word});
      sentence += group;
      i = close;
    }
    const Group* pronoun = nullptr;
    const Group* entity = nullptr;
    for (const auto& g : groups) {
      if (gender_from_pronoun(g.text) != Gender::Neutral) {
        if (!pronoun) pronoun = &g;
      } else if (!entity) {
        entity = &g;
      }
    }
    if (!pronoun || !entity) throw ParseError(module, n + 1, "expected one bracketed entity and one pronoun");
    const auto spans = text::tokenize_spans(sentence);
    const auto index = token_at_offset(spans, entity->last_word_begin, sentence.size());
    if (!index) throw ParseError(module, n + 1, "cannot locate entity token");
    ChallengeInstance inst;
    inst.id = fmt::format("{}-{}", id_prefix, n + 1);
    inst.sentence = sentence;
    inst.entity_index = *index;
    inst.entity_phrase = sentence.substr(spans[*index].begin, spans[*index].end - spans[*index].begin);
    inst.gold_gender = gender_from_pronoun(pronoun->text);
    inst.stereotype = stereotype;
    inst.source_dataset = SourceDataset::WinoBias;
    if (auto violation = check(inst); !violation.empty()) throw ParseError(module, n + 1, violation);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ChallengeInstance> ingest_winogender(const std::string& path, const OccupationMajority& majority) {
  const std::string module(kModule);
  const auto lines = text::read_lines(path, module);
  std::vector<ChallengeInstance> out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto cols = text::split(lines[n], '\t');
    if (cols.size() < 2 || cols[0] == "sentid") continue;
    // sentid: occupation.participant.answer.gender.txt
    const auto parts = text::split(cols[0], '.');
    if (parts.size() < 4) throw ParseError(module, n + 1, "bad sentid '" + cols[0] + "'");
    const auto gender = parse_gender(parts[3]);
    if (!gender) throw ParseError(module, n + 1, "bad gender in sentid '" + cols[0] + "'");
    const bool occupation_answer = parts[2] == "0";
    const std::string& entity_word = occupation_answer ? parts[0] : parts[1];
    const std::string head = text::split(entity_word, ' ').back();
    const auto tokens = text::tokenize(cols[1]);
    const auto it = std::find_if(tokens.begin(), tokens.end(),
                                 [&](const std::string& t) { return text::to_lower(t) == text::to_lower(head); });
    if (it == tokens.end()) throw ParseError(module, n + 1, "entity '" + head + "' not found in sentence");

    ChallengeInstance inst;
    inst.id = "wg-" + cols[0];
    inst.sentence = cols[1];
    inst.entity_index = static_cast<std::size_t>(it - tokens.begin());
    inst.entity_phrase = *it;
    inst.gold_gender = *gender;
    inst.source_dataset = SourceDataset::WinoGender;
    inst.stereotype = Stereotype::Neutral;
    if (*gender != Gender::Neutral) {
      if (const auto m = majority.find(text::to_lower(head)); m != majority.end()) {
        inst.stereotype = m->second == *gender ? Stereotype::Pro : Stereotype::Anti;
      }
    }
    if (auto violation = check(inst); !violation.empty()) throw ParseError(module, n + 1, violation);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ChallengeInstance> ingest_aggregate(const std::string& path, SourceDataset dataset,
                                                const std::vector<std::string>& pro_lines,
                                                const std::vector<std::string>& anti_lines,
                                                std::string_view id_prefix) {
  const std::string module(kModule);
  const std::set<std::string, std::less<>> pro(pro_lines.begin(), pro_lines.end());
  const std::set<std::string, std::less<>> anti(anti_lines.begin(), anti_lines.end());
  const auto lines = text::read_lines(path, module);
  std::vector<ChallengeInstance> out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    const auto cols = text::split(lines[n], '\t');
    if (cols.size() != 4) throw ParseError(module, n + 1, "expected 4 tab-separated columns");
    const auto gender = parse_gender(cols[0]);
    if (!gender) throw ParseError(module, n + 1, "bad gender '" + cols[0] + "'");
    const auto word_index = parse_index(cols[1]);
    const auto words = text::whitespace_spans(cols[2]);
    if (!word_index || *word_index >= words.size()) throw ParseError(module, n + 1, "bad word index");
    const auto spans = text::tokenize_spans(cols[2]);
    const auto& word = words[*word_index];
    std::optional<std::size_t> index;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (spans[i].begin >= word.begin && spans[i].end <= word.end &&
          text::to_lower(cols[2].substr(spans[i].begin, spans[i].end - spans[i].begin)) ==
              text::to_lower(text::split(cols[3], ' ').back())) {
        index = i;
        break;
      }
    }
    if (!index) throw ParseError(module, n + 1, "entity '" + cols[3] + "' not at the given word index");

    ChallengeInstance inst;
    inst.id = fmt::format("{}-{}", id_prefix, n + 1);
    inst.sentence = cols[2];
    inst.entity_index = *index;
    inst.entity_phrase = cols[2].substr(spans[*index].begin, spans[*index].end - spans[*index].begin);
    inst.gold_gender = *gender;
    inst.source_dataset = dataset;
    inst.stereotype = Stereotype::Neutral;
    if (*gender != Gender::Neutral) {
      if (pro.count(lines[n])) {
        inst.stereotype = Stereotype::Pro;
      } else if (anti.count(lines[n])) {
        inst.stereotype = Stereotype::Anti;
      }
    }
    if (auto violation = check(inst); !violation.empty()) throw ParseError(module, n + 1, violation);
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace mtgb::corpus
