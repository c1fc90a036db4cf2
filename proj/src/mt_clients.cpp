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

#include "mtgb/mt_clients.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::mt {

namespace {

constexpr std::string_view kModule = "mt_clients";

using json = nlohmann::json;

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += fmt::format("%{:02X}", c);
    }
  }
  return out;
}

std::string expand_env(std::string value) {
  std::size_t pos = 0;
  while ((pos = value.find("${", pos)) != std::string::npos) {
    const std::size_t close = value.find('}', pos);
    if (close == std::string::npos) break;
    const std::string name = value.substr(pos + 2, close - pos - 2);
    const char* env = std::getenv(name.c_str());
    const std::string replacement = env ? env : "";
    value.replace(pos, close - pos + 1, replacement);
    pos += replacement.size();
  }
  return value;
}

// Splits "http://host:port/path?q" into ("http://host:port", "/path?q").
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  const std::size_t path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

void collect(const json& node, const std::vector<std::string>& segments, std::size_t depth,
             std::vector<std::string>& out) {
  if (depth == segments.size()) {
    if (!node.is_string()) throw std::runtime_error("response path does not resolve to a string");
    out.push_back(node.get<std::string>());
    return;
  }
  const std::string& seg = segments[depth];
  if (seg == "*") {
    if (!node.is_array()) throw std::runtime_error("'*' applied to a non-array");
    for (const auto& item : node) collect(item, segments, depth + 1, out);
    return;
  }
  if (node.is_array()) {
    const std::size_t index = std::stoul(seg);
    if (index >= node.size()) throw std::runtime_error("array index out of range");
    collect(node[index], segments, depth + 1, out);
    return;
  }
  if (!node.is_object() || !node.contains(seg)) throw std::runtime_error("missing key '" + seg + "'");
  collect(node.at(seg), segments, depth + 1, out);
}

}  // namespace

std::vector<TranslationResult> FileBackend::translate(std::span<const TranslationRequest> requests,
                                                      const LanguageCode& /*language*/) {
  std::vector<TranslationResult> results;
  results.reserve(requests.size());
  for (const auto& req : requests) {
    const auto it = table_.find(req.instance_id);
    if (it == table_.end()) {
      results.push_back({"", "no translation for id '" + req.instance_id + "'"});
    } else {
      results.push_back({it->second, ""});
    }
  }
  return results;
}

std::unique_ptr<FileBackend> file_backend(const std::string& path) {
  const std::string module(kModule);
  const auto lines = text::read_lines(path, module);
  std::map<std::string, std::string, std::less<>> table;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const std::size_t tab = lines[n].find('\t');
    if (tab == std::string::npos) throw ParseError(module, n + 1, "expected 'instance_id<TAB>target'");
    std::string id = lines[n].substr(0, tab);
    if (!table.emplace(id, lines[n].substr(tab + 1)).second) {
      throw ParseError(module, n + 1, "duplicate id '" + id + "'");
    }
  }
  return std::make_unique<FileBackend>(std::move(table));
}

std::optional<std::string> fixture_provenance(const std::string& fixture_path) {
  const std::string sidecar = fixture_path + ".json";
  if (!std::filesystem::exists(sidecar)) return std::nullopt;
  const auto j = nlohmann::ordered_json::parse(text::read_file(sidecar, std::string(kModule)), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(std::string(kModule), 1, sidecar + " is not a JSON object");
  return j.dump(2) + "\n";
}

std::string serialize_translations(const std::vector<TranslationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    if (r.ok()) out += r.instance_id + "\t" + r.target + "\n";
  }
  return out;
}

std::vector<TranslationRecord> translate_corpus(const std::vector<corpus::ChallengeInstance>& instances,
                                                TranslatorBackend& backend, const LanguageCode& language,
                                                std::string_view system_id, std::size_t jobs) {
  std::vector<TranslationRecord> records(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    records[i].instance_id = instances[i].id;
    records[i].system_id = std::string(system_id);
    records[i].language = language;
    records[i].source = instances[i].sentence;
  }
  const std::size_t batch = std::max<std::size_t>(1, backend.batch_size());
  const std::size_t num_batches = (instances.size() + batch - 1) / batch;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t b = next.fetch_add(1);
      if (b >= num_batches) return;
      const std::size_t lo = b * batch;
      const std::size_t hi = std::min(lo + batch, instances.size());
      std::vector<TranslationRequest> requests;
      for (std::size_t i = lo; i < hi; ++i) requests.push_back({instances[i].id, instances[i].sentence});
      try {
        auto results = backend.translate(requests, language);
        if (results.size() != requests.size()) {
          throw BatchError(std::string(kModule), "backend returned a result count different from the request count");
        }
        for (std::size_t i = lo; i < hi; ++i) {
          auto& rec = records[i];
          auto& res = results[i - lo];
          rec.target = std::move(res.target);
          rec.error = std::move(res.error);
          if (rec.error.empty() && text::trim(rec.target).empty()) rec.error = "empty translation";
          if (!rec.error.empty()) rec.target.clear();
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, num_batches));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

std::size_t count_failed(const std::vector<TranslationRecord>& records) {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const TranslationRecord& r) { return !r.ok(); }));
}

HttpConfig parse_http_config(std::string_view json_text) {
  const std::string module(kModule);
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(module, std::string("malformed HTTP backend config: ") + e.what());
  }
  HttpConfig cfg;
  try {
    cfg.url = j.at("url").get<std::string>();
    cfg.method = j.value("method", cfg.method);
    if (j.contains("headers")) {
      for (const auto& [k, v] : j.at("headers").items()) cfg.headers[k] = v.get<std::string>();
    }
    cfg.body_template = j.value("body_template", cfg.body_template);
    cfg.response_path = j.at("response_path").get<std::string>();
    cfg.rate_per_sec = j.value("rate_per_sec", cfg.rate_per_sec);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.max_attempts = j.value("max_attempts", cfg.max_attempts);
    cfg.backoff_ms = j.value("backoff_ms", cfg.backoff_ms);
    cfg.timeout_sec = j.value("timeout_sec", cfg.timeout_sec);
  } catch (const json::exception& e) {
    throw Error(module, std::string("invalid HTTP backend config: ") + e.what());
  }
  if (cfg.method != "POST" && cfg.method != "GET") throw Error(module, "method must be GET or POST");
  if (cfg.batch_size == 0) throw Error(module, "batch_size must be >= 1");
  if (cfg.max_attempts < 1) throw Error(module, "max_attempts must be >= 1");
  if (cfg.rate_per_sec < 0) throw Error(module, "rate_per_sec must be >= 0");
  return cfg;
}

HttpConfig load_http_config(const std::string& path) {
  return parse_http_config(text::read_file(path, std::string(kModule)));
}

RateLimiter::RateLimiter(double rate_per_sec) {
  if (rate_per_sec > 0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate_per_sec));
  }
}

void RateLimiter::acquire() {
  if (interval_.count() == 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = next_ && *next_ > now ? *next_ : now;
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)), limiter_(config_.rate_per_sec) {}

std::vector<TranslationResult> HttpBackend::translate(std::span<const TranslationRequest> requests,
                                                      const LanguageCode& language) {
  const bool batched = config_.body_template.find("{{texts}}") != std::string::npos;
  if (batched || requests.size() <= 1) return send(requests, language);
  std::vector<TranslationResult> results;
  results.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto one = send(requests.subspan(i, 1), language);
    results.push_back(std::move(one.front()));
  }
  return results;
}

std::vector<TranslationResult> HttpBackend::send(std::span<const TranslationRequest> requests,
                                                 const LanguageCode& language) {
  std::vector<TranslationResult> results(requests.size());
  if (requests.empty()) return results;

  json texts = json::array();
  for (const auto& r : requests) texts.push_back(r.source);
  std::string body = config_.body_template;
  replace_all(body, "{{texts}}", texts.dump());
  replace_all(body, "{{text}}", json(requests.front().source).dump());
  replace_all(body, "{{lang}}", language.str());

  std::string url = config_.url;
  replace_all(url, "{{lang}}", url_encode(language.str()));
  replace_all(url, "{{text}}", url_encode(requests.front().source));
  const auto [base, path] = split_url(url);

  httplib::Headers headers;
  for (const auto& [k, v] : config_.headers) headers.emplace(k, expand_env(v));

  const auto fail_all = [&](const std::string& why) {
    for (auto& r : results) r = {"", why};
    return results;
  };

  std::string last_error;
  bool unreachable = false;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms << (attempt - 1)));
    limiter_.acquire();
    httplib::Client client(base);
    client.set_connection_timeout(config_.timeout_sec, 0);
    client.set_read_timeout(config_.timeout_sec, 0);
    auto res = config_.method == "GET" ? client.Get(path, headers)
                                       : client.Post(path, headers, body, "application/json");
    if (!res) {
      unreachable = true;
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    unreachable = false;
    if (res->status < 200 || res->status >= 300) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    std::vector<std::string> texts_out;
    try {
      texts_out = extract_response_texts(res->body, config_.response_path);
    } catch (const std::exception& e) {
      return fail_all(std::string("malformed response: ") + e.what());
    }
    if (texts_out.size() != requests.size()) {
      return fail_all(fmt::format("response has {} translations for {} requests", texts_out.size(), requests.size()));
    }
    for (std::size_t i = 0; i < requests.size(); ++i) results[i] = {std::move(texts_out[i]), ""};
    return results;
  }
  if (unreachable) throw BatchError(std::string(kModule), "backend unreachable at '" + base + "': " + last_error);
  return fail_all(last_error);
}

std::unique_ptr<HttpBackend> http_backend(const HttpConfig& config) { return std::make_unique<HttpBackend>(config); }

std::vector<std::string> extract_response_texts(std::string_view response_body, std::string_view path) {
  const json j = json::parse(response_body);
  std::vector<std::string> segments;
  if (!path.empty()) segments = text::split(path, '.');
  std::vector<std::string> out;
  collect(j, segments, 0, out);
  return out;
}

}  // namespace mtgb::mt
