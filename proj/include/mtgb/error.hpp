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
#include <stdexcept>
#include <string>

namespace mtgb {

// Base for every error the toolkit raises. The message is prefixed with the
// owning module so CLI output reads "corpus: line 3: ...".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// A malformed line in one of the TSV/CSV/JSONL inputs.
class ParseError : public Error {
 public:
  ParseError(std::string module, std::size_t line, const std::string& message)
      : Error(std::move(module), "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A failure that aborts a whole batch (unreachable backend, degenerate corpus).
class BatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtgb
