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

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgb/corpus.hpp"
#include "mtgb/language.hpp"

namespace mtgb::mt {

struct TranslationRequest {
  std::string instance_id;
  std::string source;
};

// Outcome of one sentence. `error` is empty on success.
struct TranslationResult {
  std::string target;
  std::string error;

  bool ok() const { return error.empty(); }
};

// A source of target-language translations. Implementations must be callable
// from several threads at once. A per-sentence failure is reported in the
// result; a failure of the whole backend (unreachable service) throws
// mtgb::BatchError.
class TranslatorBackend {
 public:
  virtual ~TranslatorBackend() = default;

  // Number of requests the backend prefers per translate() call.
  virtual std::size_t batch_size() const { return 1; }

  // One result per request, same order.
  virtual std::vector<TranslationResult> translate(std::span<const TranslationRequest> requests,
                                                   const LanguageCode& language) = 0;
};

struct TranslationRecord {
  std::string instance_id;
  std::string system_id;
  LanguageCode language{"es"};
  std::string source;
  std::string target;
  std::string error;  // non-empty when the translation failed

  bool ok() const { return error.empty() && !target.empty(); }
};

// One record per instance, input order. Per-instance failures are recorded on
// the record; BatchError from the backend propagates.
std::vector<TranslationRecord> translate_corpus(const std::vector<corpus::ChallengeInstance>& instances,
                                                TranslatorBackend& backend, const LanguageCode& language,
                                                std::string_view system_id, std::size_t jobs = 1);

std::size_t count_failed(const std::vector<TranslationRecord>& records);

// Stored translations from a `instance_id <TAB> target` fixture. Unknown ids
// fail per sentence.
class FileBackend final : public TranslatorBackend {
 public:
  explicit FileBackend(std::map<std::string, std::string, std::less<>> table) : table_(std::move(table)) {}

  std::vector<TranslationResult> translate(std::span<const TranslationRequest> requests,
                                           const LanguageCode& language) override;

  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> table_;
};

// Throws ParseError on duplicate ids or missing tab. CRLF is normalized.
std::unique_ptr<FileBackend> file_backend(const std::string& path);

// Provenance of a fixture (producing model, decoding settings, date) is kept
// beside it as `<fixture>.json`. Returns that object re-serialized, or nullopt
// without a sidecar. Throws ParseError when the sidecar is not a JSON object.
std::optional<std::string> fixture_provenance(const std::string& fixture_path);

// Serializes successful records in the fixture format, so a run's output can
// be replayed as a file backend.
std::string serialize_translations(const std::vector<TranslationRecord>& records);

struct HttpConfig {
  // URL template; {{lang}} is substituted (URL-encoded).
  std::string url;
  std::string method = "POST";
  // Header values may reference environment variables as ${NAME}.
  std::map<std::string, std::string> headers;
  // Request body template. {{text}} expands to a JSON string, {{texts}} to a
  // JSON array of strings (batched requests), {{lang}} to the language code.
  // For GET, {{text}} in the URL is URL-encoded instead.
  std::string body_template;
  // Dot path to the translation in the response JSON. Numeric segments index
  // arrays; a `*` segment maps over an array ("translations.*.text").
  std::string response_path;
  double rate_per_sec = 0.0;  // 0 disables the limiter
  std::size_t batch_size = 1;
  int max_attempts = 3;
  int backoff_ms = 500;  // doubled after each failed attempt
  int timeout_sec = 30;
};

HttpConfig parse_http_config(std::string_view json_text);
HttpConfig load_http_config(const std::string& path);

// Serializes request starts so that no more than `rate_per_sec` begin in any
// one-second window.
class RateLimiter {
 public:
  explicit RateLimiter(double rate_per_sec);
  void acquire();

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::duration interval_{};
  std::optional<std::chrono::steady_clock::time_point> next_;
};

class HttpBackend final : public TranslatorBackend {
 public:
  explicit HttpBackend(HttpConfig config);

  std::size_t batch_size() const override { return config_.batch_size; }
  std::vector<TranslationResult> translate(std::span<const TranslationRequest> requests,
                                           const LanguageCode& language) override;

 private:
  std::vector<TranslationResult> send(std::span<const TranslationRequest> requests, const LanguageCode& language);

  HttpConfig config_;
  RateLimiter limiter_;
};

std::unique_ptr<HttpBackend> http_backend(const HttpConfig& config);

// Resolves a dot path against a parsed response; exposed for tests.
std::vector<std::string> extract_response_texts(std::string_view response_body, std::string_view path);

}  // namespace mtgb::mt
