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

#include "mtgb/validation.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <limits>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::validation {

namespace {

const std::string kModule = "validation";
constexpr std::string_view kHeader = "instance_id,target_sentence,entity_span,gender";

bool valid_label(std::string_view s) {
  return s.empty() || s == "masculine" || s == "feminine" || s == "neutral" || s == "unknown";
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 records; quoted fields may hold commas, quotes and newlines.
std::vector<std::vector<std::string>> csv_records(std::string_view csv) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < csv.size(); ++i) {
    char c = csv[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < csv.size() && csv[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < csv.size() && csv[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(kModule, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

std::size_t parse_index(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError(kModule, line, fmt::format("bad entity_span '{}'", s));
  return v;
}

std::uint64_t next_mt(void* state) { return (*static_cast<std::mt19937_64*>(state))(); }

std::map<std::string, std::string, std::less<>> labels_by_id(const std::vector<SheetRow>& rows, char who) {
  std::map<std::string, std::string, std::less<>> out;
  for (const auto& r : rows) {
    if (!valid_label(r.gender))
      throw Error(kModule, fmt::format("annotator {}: bad label '{}' for '{}'", who, r.gender, r.instance_id));
    if (!out.emplace(r.instance_id, r.gender).second)
      throw Error(kModule, fmt::format("annotator {}: duplicate id '{}'", who, r.instance_id));
  }
  return out;
}

double percent(std::size_t hits, std::size_t n) {
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace

std::uint64_t bounded_draw(std::uint64_t bound, std::uint64_t (*next)(void*), void* state) {
  if (bound == 0) throw Error(kModule, "bounded_draw with empty range");
  // Largest multiple of bound that fits; draws at or above it are retried.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = next(state);
    if (x < limit) return x % bound;
  }
}

AnnotationSheet sample_for_validation(const std::vector<pipeline::PredictionRecord>& records, std::size_t n,
                                      std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].status == pipeline::Status::Ok) pool.push_back(i);
  if (n > pool.size())
    throw Error(kModule, fmt::format("requested {} rows but only {} records have status ok", n, pool.size()));

  AnnotationSheet sheet;
  sheet.seed = seed;
  if (!records.empty()) {
    sheet.system_id = records.front().system_id;
    sheet.language = records.front().language.str();
  }
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: position k receives a uniform pick from the rest.
  for (std::size_t k = 0; k < n; ++k) {
    const auto pick = k + bounded_draw(pool.size() - k, next_mt, &rng);
    std::swap(pool[k], pool[pick]);
    const auto& r = records[pool[k]];
    const auto [lo, hi] = std::minmax_element(r.entity_target_indices.begin(), r.entity_target_indices.end());
    SheetRow row;
    row.instance_id = r.instance_id;
    row.target_sentence = text::join(r.target_tokens, " ");
    if (lo != r.entity_target_indices.end()) {
      row.span_begin = *lo;
      row.span_end = *hi + 1;
    }
    sheet.rows.push_back(std::move(row));
  }
  return sheet;
}

std::string to_csv(const std::vector<SheetRow>& rows) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{}:{},{}\n", csv_field(r.instance_id), csv_field(r.target_sentence), r.span_begin,
                       r.span_end, csv_field(r.gender));
  return out;
}

std::vector<SheetRow> parse_csv(std::string_view csv) {
  auto records = csv_records(csv);
  if (records.empty()) throw Error(kModule, "empty annotation sheet");
  if (text::join(records.front(), ",") != kHeader)
    throw ParseError(kModule, 1, fmt::format("expected header '{}'", kHeader));
  std::vector<SheetRow> rows;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const auto& f = records[k];
    const std::size_t line = k + 1;
    if (f.size() != 4) throw ParseError(kModule, line, fmt::format("expected 4 fields, got {}", f.size()));
    const auto colon = f[2].find(':');
    if (colon == std::string::npos) throw ParseError(kModule, line, fmt::format("bad entity_span '{}'", f[2]));
    SheetRow row{f[0], f[1], parse_index(std::string_view(f[2]).substr(0, colon), line),
                 parse_index(std::string_view(f[2]).substr(colon + 1), line), std::string(text::trim(f[3]))};
    if (row.span_end < row.span_begin) throw ParseError(kModule, line, "entity_span end before start");
    if (!valid_label(row.gender)) throw ParseError(kModule, line, fmt::format("bad gender '{}'", row.gender));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sidecar_json(const AnnotationSheet& sheet) {
  nlohmann::ordered_json j;
  j["system_id"] = sheet.system_id;
  j["language"] = sheet.language;
  j["seed"] = sheet.seed;
  j["n"] = sheet.rows.size();
  return j.dump(2) + "\n";
}

void save_sheet(const std::string& path, const AnnotationSheet& sheet) {
  text::write_file(path, to_csv(sheet.rows), kModule);
  text::write_file(path + ".json", sidecar_json(sheet), kModule);
}

AnnotationSheet load_sheet(const std::string& path) {
  AnnotationSheet sheet;
  sheet.rows = parse_csv(text::read_file(path, kModule));
  if (std::filesystem::exists(path + ".json")) {
    try {
      auto j = nlohmann::json::parse(text::read_file(path + ".json", kModule));
      sheet.system_id = j.at("system_id").get<std::string>();
      sheet.language = j.at("language").get<std::string>();
      sheet.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(kModule, fmt::format("malformed sheet metadata {}.json: {}", path, e.what()));
    }
  }
  return sheet;
}

AgreementReport compute_agreement(const AnnotationSheet& sheet, const std::vector<SheetRow>& annotations_a,
                                  const std::vector<SheetRow>& annotations_b,
                                  const std::vector<pipeline::PredictionRecord>& predictions) {
  const auto a = labels_by_id(annotations_a, 'A');
  const auto b = labels_by_id(annotations_b, 'B');
  std::map<std::string, std::string, std::less<>> automatic;
  for (const auto& p : predictions) automatic.emplace(p.instance_id, std::string(morph::to_string(p.predicted)));

  AgreementReport report;
  report.n = sheet.rows.size();
  std::size_t a_hits = 0, a_n = 0, b_hits = 0, b_n = 0, ab_hits = 0, ab_n = 0;
  for (const auto& row : sheet.rows) {
    const auto ia = a.find(row.instance_id);
    const auto ib = b.find(row.instance_id);
    const auto ip = automatic.find(row.instance_id);
    if (ia == a.end()) throw Error(kModule, fmt::format("annotator A has no row for '{}'", row.instance_id));
    if (ib == b.end()) throw Error(kModule, fmt::format("annotator B has no row for '{}'", row.instance_id));
    if (ip == automatic.end()) throw Error(kModule, fmt::format("no prediction for '{}'", row.instance_id));
    const std::string& la = ia->second;
    const std::string& lb = ib->second;
    const std::string& auto_label = ip->second;
    report.blank_labels += la.empty() + lb.empty();
    bool disagree = false;
    if (!la.empty()) {
      ++a_n;
      a_hits += la == auto_label;
      disagree |= la != auto_label;
    }
    if (!lb.empty()) {
      ++b_n;
      b_hits += lb == auto_label;
      disagree |= lb != auto_label;
    }
    if (!la.empty() && !lb.empty()) {
      ++ab_n;
      ab_hits += la == lb;
    }
    if (disagree) report.disagreements.push_back(row.instance_id);
  }
  std::vector<double> rates;
  if (a_n > 0) rates.push_back(percent(a_hits, a_n));
  if (b_n > 0) rates.push_back(percent(b_hits, b_n));
  report.human_vs_auto = rates.empty() ? 0.0 : std::accumulate(rates.begin(), rates.end(), 0.0) / rates.size();
  report.inter_annotator = percent(ab_hits, ab_n);
  return report;
}

std::string to_json(const AgreementReport& r) {
  nlohmann::ordered_json j;
  j["human_vs_auto"] = r.human_vs_auto;
  j["inter_annotator"] = r.inter_annotator;
  j["n"] = r.n;
  j["blank_labels"] = r.blank_labels;
  j["disagreements"] = r.disagreements;
  return j.dump(2) + "\n";
}

std::vector<SheetRow> annotate_interactive(std::vector<SheetRow> rows, std::istream& in, std::ostream& out) {
  const std::size_t todo = std::count_if(rows.begin(), rows.end(), [](const SheetRow& r) { return r.gender.empty(); });
  std::size_t seen = 0;
  for (auto& row : rows) {
    if (!row.gender.empty()) continue;
    ++seen;
    auto tokens = text::split(row.target_sentence, ' ');
    if (row.span_begin < row.span_end && row.span_end <= tokens.size()) {
      tokens[row.span_begin].insert(0, "[");
      tokens[row.span_end - 1] += "]";
    }
    out << fmt::format("({}/{}) {}\n  {}\n  gender [m/f/n/u, enter skips, q quits]: ", seen, todo, row.instance_id,
                       text::join(tokens, " "))
        << std::flush;
    std::string answer;
    for (;;) {
      if (!std::getline(in, answer)) return rows;
      auto a = text::trim(answer);
      if (a == "q") return rows;
      if (a.empty()) break;
      if (a == "m") row.gender = "masculine";
      else if (a == "f") row.gender = "feminine";
      else if (a == "n") row.gender = "neutral";
      else if (a == "u") row.gender = "unknown";
      if (!row.gender.empty()) break;
      out << "  please answer m, f, n, u, q or enter: " << std::flush;
    }
  }
  return rows;
}

}  // namespace mtgb::validation
