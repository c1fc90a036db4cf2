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

#include <filesystem>
#include <string>
#include <vector>

#include "mtgb/language.hpp"

namespace mtgb::testing {

std::string fixture_path(const std::string& relative);
std::string source_path(const std::string& relative);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct MorphCase {
  std::size_t line;
  std::string expected;
  std::string sentence;  // brackets removed
  std::vector<std::string> tokens;
  std::vector<std::size_t> entity;
  std::string note;
};

// Reads tests/fixtures/morphology/<lang>.tsv.
std::vector<MorphCase> load_morph_cases(const LanguageCode& language);

}  // namespace mtgb::testing
