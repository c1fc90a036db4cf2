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

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace mtgb {

// ISO-639-1 target language code. Construction validates against the
// registry: the eight built-in gendered languages plus anything added through
// LanguageRegistry::add().
class LanguageCode {
 public:
  explicit LanguageCode(std::string_view code);

  const std::string& str() const noexcept { return code_; }
  auto operator<=>(const LanguageCode&) const = default;

 private:
  std::string code_;
};

class LanguageRegistry {
 public:
  static bool contains(std::string_view code);
  // Extends the accepted set. Morphology still only supports the built-ins.
  static void add(std::string_view code);
  static std::vector<std::string> codes();
  static const std::vector<std::string>& builtin();
};

}  // namespace mtgb
