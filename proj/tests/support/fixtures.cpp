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

#include "fixtures.hpp"

#include <random>
#include <stdexcept>

#include "mtgb/aligner.hpp"
#include "mtgb/text.hpp"

namespace mtgb::testing {

std::string fixture_path(const std::string& relative) { return std::string(MTGB_FIXTURE_DIR) + "/" + relative; }
std::string source_path(const std::string& relative) { return std::string(MTGB_SOURCE_DIR) + "/" + relative; }

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("mtgb-" + tag + "-" + std::to_string(rd()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<MorphCase> load_morph_cases(const LanguageCode& language) {
  const auto lines = text::read_lines(fixture_path("morphology/" + language.str() + ".tsv"), "test");
  std::vector<MorphCase> cases;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    const auto cols = text::split(lines[n], '\t');
    if (cols.size() < 2) throw std::runtime_error("bad fixture line " + std::to_string(n + 1));
    MorphCase c;
    c.line = n + 1;
    c.expected = cols[0];
    c.note = cols.size() > 2 ? cols[2] : "";
    // Tokenize word by word so bracketed words map to token positions.
    std::vector<std::string> words;
    for (const auto& w : text::split(cols[1], ' '))
      if (!w.empty()) words.push_back(w);
    std::vector<std::string> plain_words;
    for (const auto& w : words) {
      const auto open = w.find('[');
      const auto close = w.find(']');
      std::string plain = w;
      std::string marked;
      if (open != std::string::npos && close != std::string::npos && close > open) {
        marked = w.substr(open + 1, close - open - 1);
        plain = w.substr(0, open) + marked + w.substr(close + 1);
      }
      auto toks = align::tokenize_target(plain, language);
      if (!marked.empty()) {
        bool found = false;
        for (std::size_t k = 0; k < toks.size(); ++k) {
          if (toks[k] == marked) {
            c.entity.push_back(c.tokens.size() + k);
            found = true;
            break;
          }
        }
        if (!found) throw std::runtime_error("bracketed word is not a token on line " + std::to_string(n + 1));
      }
      c.tokens.insert(c.tokens.end(), toks.begin(), toks.end());
      plain_words.push_back(plain);
    }
    c.sentence = text::join(plain_words, " ");
    if (c.entity.empty()) throw std::runtime_error("no entity on line " + std::to_string(n + 1));
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace mtgb::testing
