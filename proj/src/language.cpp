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

#include "mtgb/language.hpp"

#include <algorithm>
#include <mutex>

#include "mtgb/error.hpp"

namespace mtgb {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::string>& extra_codes() {
  static std::vector<std::string> codes;
  return codes;
}

bool well_formed(std::string_view code) {
  return code.size() == 2 && std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

const std::vector<std::string>& LanguageRegistry::builtin() {
  static const std::vector<std::string> codes{"es", "fr", "it", "ru", "uk", "he", "ar", "de"};
  return codes;
}

bool LanguageRegistry::contains(std::string_view code) {
  const auto& b = builtin();
  if (std::find(b.begin(), b.end(), code) != b.end()) return true;
  std::lock_guard lock(registry_mutex());
  const auto& extra = extra_codes();
  return std::find(extra.begin(), extra.end(), code) != extra.end();
}

void LanguageRegistry::add(std::string_view code) {
  if (!well_formed(code)) throw Error("language", "not an ISO-639-1 code: '" + std::string(code) + "'");
  if (contains(code)) return;
  std::lock_guard lock(registry_mutex());
  extra_codes().emplace_back(code);
}

std::vector<std::string> LanguageRegistry::codes() {
  std::vector<std::string> all = builtin();
  std::lock_guard lock(registry_mutex());
  all.insert(all.end(), extra_codes().begin(), extra_codes().end());
  return all;
}

LanguageCode::LanguageCode(std::string_view code) : code_(code) {
  if (!LanguageRegistry::contains(code)) {
    throw Error("language", "unsupported language '" + std::string(code) + "'");
  }
}

}  // namespace mtgb
