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

#include "mtgb/aligner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "mtgb/error.hpp"
#include "mtgb/text.hpp"

namespace mtgb::align {

namespace {

constexpr std::string_view kModule = "aligner";

constexpr double kMinTension = 0.1;
constexpr double kMaxTension = 14.0;
constexpr double kTensionRate = 20.0;
constexpr double kTieEpsilon = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieEpsilon * std::max({1.0, std::abs(a), std::abs(b)});
}

// Position of the best source for target j under the prior alone: smallest
// deviation, then smallest index.
std::size_t diagonal_source(std::size_t j, std::size_t m, std::size_t n) {
  std::size_t best = 0;
  double best_d = diagonal::deviation(0, n, j, m);
  for (std::size_t i = 1; i < n; ++i) {
    const double d = diagonal::deviation(i, n, j, m);
    if (d < best_d && !nearly_equal(d, best_d)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

std::vector<std::string> tokenize_source(std::string_view sentence) {
  auto tokens = text::tokenize(sentence);
  for (auto& t : tokens) t = fold_token(t);
  return tokens;
}

std::vector<std::string> tokenize_target(std::string_view sentence, const LanguageCode& language) {
  auto tokens = text::tokenize(sentence);
  if (language.str() == "fr" || language.str() == "it") tokens = text::split_elisions(tokens);
  return tokens;
}

std::string fold_token(std::string_view token) { return text::to_lower(text::compose_diacritics(token)); }

TokenizedBitext tokenize_pairs(const std::vector<mt::TranslationRecord>& records) {
  TokenizedBitext out;
  for (const auto& rec : records) {
    if (!rec.ok()) {
      ++out.excluded;
      continue;
    }
    TokenizedPair pair;
    pair.pair_id = rec.instance_id;
    pair.source_tokens = tokenize_source(rec.source);
    pair.target_surface = tokenize_target(rec.target, rec.language);
    pair.target_tokens.reserve(pair.target_surface.size());
    for (const auto& t : pair.target_surface) pair.target_tokens.push_back(fold_token(t));
    if (!pair.trainable()) {
      ++out.excluded;
      continue;
    }
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

void AlignerConfig::validate() const {
  const std::string module(kModule);
  if (iterations < 1) throw Error(module, "iterations must be >= 1");
  if (!(diagonal_tension > 0)) throw Error(module, "diagonal tension must be positive");
  if (!(null_probability > 0 && null_probability < 1)) throw Error(module, "null probability must be in (0,1)");
  if (tension_steps < 0) throw Error(module, "tension_steps must be >= 0");
}

namespace diagonal {

double deviation(std::size_t i, std::size_t n, std::size_t j, std::size_t m) {
  return std::abs(static_cast<double>(i + 1) / static_cast<double>(n) -
                  static_cast<double>(j + 1) / static_cast<double>(m));
}

double log_normalizer(std::size_t j, std::size_t m, std::size_t n, double tension) {
  double z = 0;
  for (std::size_t i = 0; i < n; ++i) z += std::exp(-tension * deviation(i, n, j, m));
  return std::log(z);
}

double expected_deviation(std::size_t j, std::size_t m, std::size_t n, double tension) {
  double z = 0;
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = deviation(i, n, j, m);
    const double w = std::exp(-tension * d);
    z += w;
    s += w * d;
  }
  return s / z;
}

double expected_deviation_derivative(std::size_t j, std::size_t m, std::size_t n, double tension) {
  double z = 0;
  double s1 = 0;
  double s2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = deviation(i, n, j, m);
    const double w = std::exp(-tension * d);
    z += w;
    s1 += w * d;
    s2 += w * d * d;
  }
  const double mean = s1 / z;
  return -(s2 / z - mean * mean);
}

double corpus_expected_deviation(const std::vector<Shape>& shapes, double tension) {
  double total = 0;
  for (const auto& s : shapes) {
    for (std::size_t j = 0; j < s.target_len; ++j) total += expected_deviation(j, s.target_len, s.source_len, tension);
  }
  return total;
}

double corpus_expected_deviation_derivative(const std::vector<Shape>& shapes, double tension) {
  double total = 0;
  for (const auto& s : shapes) {
    for (std::size_t j = 0; j < s.target_len; ++j) {
      total += expected_deviation_derivative(j, s.target_len, s.source_len, tension);
    }
  }
  return total;
}

}  // namespace diagonal

AlignmentModel::AlignmentModel() {
  source_ids_.emplace(std::string(kNullToken), kNullWord);
  source_words_.emplace_back(kNullToken);
  table_.emplace_back();
}

std::uint32_t AlignmentModel::intern_source(const std::string& w) {
  const auto [it, inserted] = source_ids_.emplace(w, static_cast<std::uint32_t>(source_words_.size()));
  if (inserted) {
    source_words_.push_back(w);
    table_.emplace_back();
  }
  return it->second;
}

std::uint32_t AlignmentModel::intern_target(const std::string& w) {
  const auto [it, inserted] = target_ids_.emplace(w, static_cast<std::uint32_t>(target_words_.size()));
  if (inserted) target_words_.push_back(w);
  return it->second;
}

double AlignmentModel::prob(std::string_view source, std::string_view target) const {
  const auto s = source_ids_.find(std::string(source));
  const auto t = target_ids_.find(std::string(target));
  if (s == source_ids_.end() || t == target_ids_.end()) return 0.0;
  const auto& row = table_[s->second];
  const auto it = row.find(t->second);
  return it == row.end() ? 0.0 : it->second;
}

double AlignmentModel::row_sum(std::string_view source) const {
  const auto s = source_ids_.find(std::string(source));
  if (s == source_ids_.end()) return 0.0;
  double sum = 0;
  for (const auto& [_, p] : table_[s->second]) sum += p;
  return sum;
}

std::string AlignmentModel::best_translation(std::string_view source) const {
  const auto s = source_ids_.find(std::string(source));
  if (s == source_ids_.end()) return {};
  const std::unordered_map<std::uint32_t, double>& row = table_[s->second];
  const std::string* best = nullptr;
  double best_p = -1;
  for (const auto& [t, p] : row) {
    if (p > best_p || (p == best_p && best && target_words_[t] < *best)) {
      best = &target_words_[t];
      best_p = p;
    }
  }
  return best ? *best : std::string();
}

std::string AlignmentModel::to_tsv() const {
  std::string out = fmt::format("# mtgb-alignment-model v1\ttension={:.17g}\tnull_probability={:.17g}\n", tension_,
                                null_probability_);
  std::vector<std::tuple<std::string_view, std::string_view, double>> rows;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    for (const auto& [t, p] : table_[s]) rows.emplace_back(source_words_[s], target_words_[t], p);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [s, t, p] : rows) out += fmt::format("{}\t{}\t{:.17g}\n", s, t, p);
  return out;
}

AlignmentModel AlignmentModel::from_tsv(std::string_view tsv) {
  const std::string module(kModule);
  AlignmentModel model;
  const auto lines = text::split(tsv, '\n');
  if (lines.empty() || !text::starts_with(lines[0], "# mtgb-alignment-model v1")) {
    throw Error(module, "not an alignment model dump");
  }
  const auto parse_double = [&](std::string_view s, std::size_t line) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(module, line, "bad number '" + std::string(s) + "'");
    return v;
  };
  for (const auto& field : text::split(lines[0], '\t')) {
    if (text::starts_with(field, "tension=")) model.tension_ = parse_double(std::string_view(field).substr(8), 1);
    if (text::starts_with(field, "null_probability=")) {
      model.null_probability_ = parse_double(std::string_view(field).substr(17), 1);
    }
  }
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto cols = text::split(lines[n], '\t');
    if (cols.size() != 3) throw ParseError(module, n + 1, "expected 'source<TAB>target<TAB>prob'");
    const std::uint32_t s = model.intern_source(cols[0]);
    const std::uint32_t t = model.intern_target(cols[1]);
    model.table_[s][t] = parse_double(cols[2], n + 1);
  }
  return model;
}

AlignmentModel train(const std::vector<TokenizedPair>& pairs, const AlignerConfig& config) {
  config.validate();
  AlignmentModel model;
  model.tension_ = config.diagonal_tension;
  model.null_probability_ = config.null_probability;

  struct Encoded {
    std::vector<std::uint32_t> source;
    std::vector<std::uint32_t> target;
  };
  std::vector<Encoded> corpus;
  std::size_t tokens = 0;
  for (const auto& p : pairs) {
    if (!p.trainable()) continue;
    Encoded e;
    for (const auto& w : p.source_tokens) e.source.push_back(model.intern_source(w));
    for (const auto& w : p.target_tokens) e.target.push_back(model.intern_target(w));
    tokens += e.target.size();
    corpus.push_back(std::move(e));
  }
  if (corpus.empty()) throw BatchError(std::string(kModule), "no trainable sentence pairs");

  const double p0 = config.null_probability;
  const double uniform = 1.0 / static_cast<double>(model.target_vocab_size());
  const std::size_t vocab = model.source_vocab_size();

  for (int iter = 0; iter < config.iterations; ++iter) {
    const bool first = iter == 0;
    const double tension = model.tension_;
    std::vector<std::unordered_map<std::uint32_t, double>> counts(vocab);
    // Non-null posterior mass per target position, keyed by (source_len, target_len).
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> position_mass;
    double log_likelihood = 0;
    double empirical_deviation = 0;

    std::vector<double> probs;
    std::vector<double> devs;
    for (const auto& pair : corpus) {
      const std::size_t n = pair.source.size();
      const std::size_t m = pair.target.size();
      auto& mass = position_mass[{n, m}];
      if (mass.empty()) mass.assign(m, 0.0);
      probs.resize(n);
      devs.resize(n);
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint32_t f = pair.target[j];
        double z = 0;
        for (std::size_t i = 0; i < n; ++i) {
          devs[i] = diagonal::deviation(i, n, j, m);
          probs[i] = std::exp(-tension * devs[i]);
          z += probs[i];
        }
        const auto t_of = [&](std::uint32_t e) {
          if (first) return uniform;
          const auto& row = model.table_[e];
          const auto it = row.find(f);
          return it == row.end() ? 0.0 : it->second;
        };
        const double null_p = p0 * t_of(AlignmentModel::kNullWord);
        double sum = null_p;
        for (std::size_t i = 0; i < n; ++i) {
          probs[i] = (1.0 - p0) * probs[i] / z * t_of(pair.source[i]);
          sum += probs[i];
        }
        if (sum <= 0) continue;
        log_likelihood += std::log(sum);
        double aligned_mass = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double post = probs[i] / sum;
          if (post == 0) continue;
          counts[pair.source[i]][f] += post;
          empirical_deviation += post * devs[i];
          aligned_mass += post;
        }
        counts[AlignmentModel::kNullWord][f] += null_p / sum;
        mass[j] += aligned_mass;
      }
    }

    for (std::size_t e = 0; e < vocab; ++e) {
      double total = 0;
      for (const auto& [_, c] : counts[e]) total += c;
      auto& row = model.table_[e];
      row.clear();
      if (total <= 0) continue;
      for (const auto& [f, c] : counts[e]) row.emplace(f, c / total);
    }
    model.log_likelihoods_.push_back(log_likelihood);

    if (config.optimize_tension) {
      double t = model.tension_;
      for (int step = 0; step < config.tension_steps; ++step) {
        double model_deviation = 0;
        for (const auto& [shape, mass] : position_mass) {
          for (std::size_t j = 0; j < mass.size(); ++j) {
            model_deviation += mass[j] * diagonal::expected_deviation(j, shape.second, shape.first, t);
          }
        }
        // Gradient of the expected complete-data log-likelihood in the tension.
        const double gradient = (model_deviation - empirical_deviation) / static_cast<double>(tokens);
        t = std::clamp(t + kTensionRate * gradient, kMinTension, kMaxTension);
      }
      model.tension_ = t;
    }
    model.tensions_.push_back(model.tension_);
  }
  return model;
}

double corpus_log_likelihood(const AlignmentModel& model, const std::vector<TokenizedPair>& pairs) {
  double ll = 0;
  const double p0 = model.null_probability();
  const std::string null_token(AlignmentModel::kNullToken);
  for (const auto& pair : pairs) {
    if (!pair.trainable()) continue;
    const std::size_t n = pair.source_tokens.size();
    const std::size_t m = pair.target_tokens.size();
    for (std::size_t j = 0; j < m; ++j) {
      const double log_z = diagonal::log_normalizer(j, m, n, model.tension());
      double sum = p0 * model.prob(null_token, pair.target_tokens[j]);
      for (std::size_t i = 0; i < n; ++i) {
        const double prior = (1.0 - p0) * std::exp(-model.tension() * diagonal::deviation(i, n, j, m) - log_z);
        sum += prior * model.prob(pair.source_tokens[i], pair.target_tokens[j]);
      }
      ll += std::log(sum);
    }
  }
  return ll;
}

std::vector<std::size_t> Alignment::targets_of(std::size_t source) const {
  std::vector<std::size_t> out;
  for (const auto& l : links) {
    if (l.source == source) out.push_back(l.target);
  }
  return out;
}

std::string Alignment::to_pharaoh() const {
  std::string out;
  for (const auto& l : links) {
    if (!out.empty()) out.push_back(' ');
    out += fmt::format("{}-{}", l.source, l.target);
  }
  return out;
}

Alignment viterbi_align(const AlignmentModel& model, const TokenizedPair& pair) {
  Alignment result;
  result.pair_id = pair.pair_id;
  const std::size_t n = pair.source_tokens.size();
  const std::size_t m = pair.target_tokens.size();
  if (n == 0 || m == 0) return result;
  const double p0 = model.null_probability();
  const std::string null_token(AlignmentModel::kNullToken);

  for (std::size_t j = 0; j < m; ++j) {
    const std::string& f = pair.target_tokens[j];
    const double log_z = diagonal::log_normalizer(j, m, n, model.tension());
    double best_score = 0;
    double best_dev = 0;
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = diagonal::deviation(i, n, j, m);
      const double score =
          (1.0 - p0) * std::exp(-model.tension() * dev - log_z) * model.prob(pair.source_tokens[i], f);
      if (score <= 0) continue;
      const bool better = best == n || (score > best_score && !nearly_equal(score, best_score)) ||
                          (nearly_equal(score, best_score) && dev < best_dev && !nearly_equal(dev, best_dev));
      if (better) {
        best = i;
        best_score = score;
        best_dev = dev;
      }
    }
    const double null_score = p0 * model.prob(null_token, f);
    if (best == n) {
      // No lexical evidence for this token: fall back to the prior, unless the
      // null word explains it.
      if (null_score > 0) continue;
      result.links.push_back({diagonal_source(j, m, n), j});
      continue;
    }
    if (null_score > best_score) continue;
    result.links.push_back({best, j});
  }
  return result;
}

std::vector<Link> parse_pharaoh(std::string_view line) {
  std::vector<Link> links;
  for (const auto& item : text::split(text::trim(line), ' ')) {
    if (item.empty()) continue;
    const std::size_t dash = item.find('-');
    std::size_t s = 0;
    std::size_t t = 0;
    const bool ok = dash != std::string::npos &&
                    std::from_chars(item.data(), item.data() + dash, s).ptr == item.data() + dash &&
                    std::from_chars(item.data() + dash + 1, item.data() + item.size(), t).ptr ==
                        item.data() + item.size() &&
                    dash > 0 && dash + 1 < item.size();
    if (!ok) throw Error(std::string(kModule), "bad Pharaoh link '" + item + "'");
    links.push_back({s, t});
  }
  return links;
}

}  // namespace mtgb::align
