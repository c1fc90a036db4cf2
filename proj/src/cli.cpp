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

#include "mtgb/cli.hpp"

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mtgb/aligner.hpp"
#include "mtgb/corpus.hpp"
#include "mtgb/error.hpp"
#include "mtgb/metrics.hpp"
#include "mtgb/morphology.hpp"
#include "mtgb/mt_clients.hpp"
#include "mtgb/pipeline.hpp"
#include "mtgb/text.hpp"
#include "mtgb/validation.hpp"

namespace mtgb::cli {

namespace {

namespace fs = std::filesystem;

const std::string kModule = "cli";

constexpr std::string_view kTranslationsFile = "translations.tsv";
constexpr std::string_view kAlignmentsFile = "alignments.pharaoh";
constexpr std::string_view kPredictionsFile = "predictions.jsonl";
constexpr std::string_view kReportJsonFile = "report.json";
constexpr std::string_view kReportTextFile = "report.txt";

// A bad flag value detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string lang;
  std::string backend;
  std::string system;
  std::string outdir = "runs";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool inject = false;
  std::string lexicon;
  std::optional<int> iterations;
  std::optional<double> tension;
  std::optional<double> p0;
  bool freeze_tension = false;
  std::vector<std::string> pool;
  std::string model_out;
  std::size_t validation_sample = 0;

  // corpus subcommands
  std::string out;
  std::vector<std::string> winobias_pro;
  std::vector<std::string> winobias_anti;
  std::string winogender;
  std::string occupations;
  std::string aggregate_winogender;
  std::string aggregate_winobias;
  std::string pro_list;
  std::string anti_list;

  // report, compare, validate
  std::string predictions;
  std::string report_a;
  std::string report_b;
  std::size_t n = validation::kDefaultSampleSize;
  std::string sheet;
  std::string annotations_a;
  std::string annotations_b;
  std::optional<double> min_agreement;
};

LanguageCode language_of(const Options& o) {
  if (o.lang.empty()) throw UsageError("--lang is required");
  try {
    return LanguageCode(o.lang);
  } catch (const Error& e) {
    throw UsageError(fmt::format("--lang: {}", e.what()));
  }
}

std::string require(const std::string& value, std::string_view flag) {
  if (value.empty()) throw UsageError(fmt::format("{} is required", flag));
  return value;
}

struct BackendSpec {
  std::string kind;
  std::string path;
};

BackendSpec parse_backend(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--backend must be file:<path> or http:<config.json>");
  BackendSpec b{spec.substr(0, colon), spec.substr(colon + 1)};
  if ((b.kind != "file" && b.kind != "http") || b.path.empty())
    throw UsageError("--backend must be file:<path> or http:<config.json>");
  return b;
}

std::unique_ptr<mt::TranslatorBackend> make_backend(const BackendSpec& b) {
  if (b.kind == "file") return mt::file_backend(b.path);
  return mt::http_backend(mt::load_http_config(b.path));
}

std::string system_of(const Options& o) {
  if (!o.system.empty()) return o.system;
  if (!o.backend.empty()) return fs::path(parse_backend(o.backend).path).stem().string();
  throw UsageError("--system is required without --backend");
}

fs::path run_dir(const Options& o) {
  fs::path dir = fs::path(o.outdir) / system_of(o) / language_of(o).str();
  fs::create_directories(dir);
  return dir;
}

std::string path_in(const fs::path& dir, std::string_view file) { return (dir / file).string(); }

std::vector<corpus::ChallengeInstance> load_instances(const Options& o) {
  auto instances = corpus::load_challenge_set(require(o.corpus, "--corpus"));
  if (o.inject) instances = corpus::inject_adjectives(instances);
  return instances;
}

align::AlignerConfig aligner_config(const Options& o) {
  align::AlignerConfig c;
  if (o.iterations) c.iterations = *o.iterations;
  if (o.tension) c.diagonal_tension = *o.tension;
  if (o.p0) c.null_probability = *o.p0;
  if (o.freeze_tension) c.optimize_tension = false;
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

morph::GenderLexicon lexicon_for(const Options& o, const LanguageCode& lang) {
  if (!morph::supports(lang)) throw UsageError(fmt::format("--lang: no morphology rules for '{}'", lang.str()));
  if (o.lexicon.empty()) return morph::base_lexicon(lang);
  return morph::load_lexicon(lang, o.lexicon);
}

// Stored translations turned back into records, one per instance.
std::vector<mt::TranslationRecord> records_from_file(const std::vector<corpus::ChallengeInstance>& instances,
                                                     const std::string& path, const LanguageCode& lang,
                                                     const std::string& system) {
  auto backend = mt::file_backend(path);
  return mt::translate_corpus(instances, *backend, lang, system);
}

std::vector<align::TokenizedPair> pooled_pairs(const Options& o, const std::vector<corpus::ChallengeInstance>& instances,
                                               const LanguageCode& lang) {
  std::vector<align::TokenizedPair> pairs;
  for (const auto& path : o.pool) {
    auto bitext = align::tokenize_pairs(records_from_file(instances, path, lang, "pool"));
    pairs.insert(pairs.end(), bitext.pairs.begin(), bitext.pairs.end());
  }
  return pairs;
}

void write_alignments(const Options& o, const fs::path& dir, const pipeline::AlignmentRun& run) {
  text::write_file(path_in(dir, kAlignmentsFile), pipeline::serialize_alignments(run.alignments), kModule);
  if (!o.model_out.empty()) text::write_file(o.model_out, run.model.to_tsv(), kModule);
}

std::string report_text(const metrics::EvaluationReport& r, const pipeline::StatusCounts& statuses) {
  std::string out = metrics::format_table({r});
  out += fmt::format(
      "\ncounts: total {} evaluated {} unknown {} translation_failed {} alignment_dropped {} fixed_gender {} "
      "neutral_gold {}\n",
      r.counts.total, r.counts.evaluated, r.counts.unknown, r.counts.translation_failed, r.counts.alignment_dropped,
      r.counts.fixed_gender, r.counts.neutral_gold);
  out += fmt::format("statuses: ok {} translation_failed {} alignment_dropped {} fixed_gender {}\n", statuses.ok,
                     statuses.translation_failed, statuses.alignment_dropped, statuses.fixed_gender);
  out += fmt::format("male   P {:.3f} R {:.3f} F1 {:.3f}\nfemale P {:.3f} R {:.3f} F1 {:.3f}\n", r.male.precision,
                     r.male.recall, r.male.f1, r.female.precision, r.female.recall, r.female.f1);
  out += fmt::format("macro-F1 pro {:.3f} anti {:.3f}\n", r.pro_macro_f1, r.anti_macro_f1);
  return out;
}

void write_report(const fs::path& dir, const std::vector<pipeline::PredictionRecord>& predictions, std::ostream& out) {
  auto report = metrics::compute_report(predictions);
  auto text = report_text(report, pipeline::count_statuses(predictions));
  text::write_file(path_in(dir, kReportJsonFile), metrics::to_json(report), kModule);
  text::write_file(path_in(dir, kReportTextFile), text, kModule);
  out << text;
}

void write_validation_sheet(const Options& o, const fs::path& dir,
                            const std::vector<pipeline::PredictionRecord>& predictions) {
  if (o.validation_sample == 0) return;
  auto sheet = validation::sample_for_validation(predictions, o.validation_sample, o.seed);
  validation::save_sheet(path_in(dir, "validation_sheet.csv"), sheet);
}

int cmd_corpus_stats(const Options& o, std::ostream& out) {
  auto instances = load_instances(o);
  out << corpus::format_stats(corpus::corpus_stats(instances));
  return kExitOk;
}

int cmd_corpus_inject(const Options& o, std::ostream& out) {
  auto instances = corpus::inject_adjectives(corpus::load_challenge_set(require(o.corpus, "--corpus")));
  corpus::save_challenge_set(require(o.out, "--out"), instances);
  out << fmt::format("wrote {} instances to {}\n", instances.size(), o.out);
  return kExitOk;
}

int cmd_corpus_ingest(const Options& o, std::ostream& out) {
  std::vector<corpus::ChallengeInstance> all;
  auto append = [&all](std::vector<corpus::ChallengeInstance> part) {
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  };
  if (!o.winogender.empty())
    append(corpus::ingest_winogender(o.winogender,
                                     corpus::load_occupation_majority(require(o.occupations, "--occupations"))));
  std::vector<std::string> pro, anti;
  if (!o.pro_list.empty()) pro = text::read_lines(o.pro_list, kModule);
  if (!o.anti_list.empty()) anti = text::read_lines(o.anti_list, kModule);
  if (!o.aggregate_winogender.empty())
    append(corpus::ingest_aggregate(o.aggregate_winogender, corpus::SourceDataset::WinoGender, pro, anti, "wg"));
  for (std::size_t k = 0; k < o.winobias_pro.size(); ++k)
    append(corpus::ingest_winobias(o.winobias_pro[k], corpus::Stereotype::Pro, fmt::format("wb-pro{}", k + 1)));
  for (std::size_t k = 0; k < o.winobias_anti.size(); ++k)
    append(corpus::ingest_winobias(o.winobias_anti[k], corpus::Stereotype::Anti, fmt::format("wb-anti{}", k + 1)));
  if (!o.aggregate_winobias.empty())
    append(corpus::ingest_aggregate(o.aggregate_winobias, corpus::SourceDataset::WinoBias, pro, anti, "wb"));
  if (all.empty()) throw UsageError("corpus ingest: no input given");
  corpus::save_challenge_set(require(o.out, "--out"), all);
  out << corpus::format_stats(corpus::corpus_stats(all));
  return kExitOk;
}

// translations.tsv plus, for a fixture with a provenance sidecar, a copy of it.
void write_translations(const Options& o, const fs::path& dir, const std::vector<mt::TranslationRecord>& records) {
  const auto path = path_in(dir, kTranslationsFile);
  text::write_file(path, mt::serialize_translations(records), kModule);
  const auto backend = parse_backend(o.backend);
  const auto provenance = backend.kind == "file" ? mt::fixture_provenance(backend.path) : std::nullopt;
  if (provenance)
    text::write_file(path + ".json", *provenance, kModule);
  else
    fs::remove(path + ".json");
}

int cmd_translate(const Options& o, std::ostream& out) {
  const auto lang = language_of(o);
  auto backend = make_backend(parse_backend(require(o.backend, "--backend")));
  auto instances = load_instances(o);
  const auto dir = run_dir(o);
  auto records = mt::translate_corpus(instances, *backend, lang, system_of(o), o.jobs);
  write_translations(o, dir, records);
  out << fmt::format("translated {} instances, {} failed\n", records.size(), mt::count_failed(records));
  return kExitOk;
}

int cmd_align(const Options& o, std::ostream& out) {
  const auto lang = language_of(o);
  auto instances = load_instances(o);
  const auto dir = run_dir(o);
  auto records = records_from_file(instances, path_in(dir, kTranslationsFile), lang, system_of(o));
  auto run = pipeline::align_records(records, aligner_config(o), pooled_pairs(o, instances, lang));
  write_alignments(o, dir, run);
  out << fmt::format("aligned {} pairs, {} excluded, tension {:.4f}\n", records.size() - run.excluded,
                     run.excluded, run.model.tension());
  return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out) {
  const auto lang = language_of(o);
  const auto lexicon = lexicon_for(o, lang);
  auto instances = load_instances(o);
  const auto dir = run_dir(o);
  auto records = records_from_file(instances, path_in(dir, kTranslationsFile), lang, system_of(o));
  auto alignments = pipeline::parse_alignments(text::read_lines(path_in(dir, kAlignmentsFile), kModule), records);
  auto predictions = pipeline::extract_predictions(instances, records, alignments, lexicon, o.jobs);
  text::write_file(path_in(dir, kPredictionsFile), pipeline::to_jsonl(predictions), kModule);
  const auto c = pipeline::count_statuses(predictions);
  out << fmt::format("extracted {} predictions: ok {} translation_failed {} alignment_dropped {} fixed_gender {}\n",
                     c.total(), c.ok, c.translation_failed, c.alignment_dropped, c.fixed_gender);
  return kExitOk;
}

std::string predictions_path(const Options& o) {
  if (!o.predictions.empty()) return o.predictions;
  return path_in(run_dir(o), kPredictionsFile);
}

int cmd_report(const Options& o, std::ostream& out) {
  const auto path = predictions_path(o);
  auto predictions = pipeline::parse_jsonl(text::read_lines(path, kModule));
  write_report(fs::path(path).parent_path(), predictions, out);
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const auto lang = language_of(o);
  const auto lexicon = lexicon_for(o, lang);
  const auto config = aligner_config(o);
  auto backend = make_backend(parse_backend(require(o.backend, "--backend")));
  auto instances = load_instances(o);
  const auto dir = run_dir(o);
  const auto system = system_of(o);

  auto translations = mt::translate_corpus(instances, *backend, lang, system, o.jobs);
  write_translations(o, dir, translations);
  auto run = pipeline::align_records(translations, config, pooled_pairs(o, instances, lang));
  write_alignments(o, dir, run);
  auto predictions = pipeline::extract_predictions(instances, translations, run.alignments, lexicon, o.jobs);
  text::write_file(path_in(dir, kPredictionsFile), pipeline::to_jsonl(predictions), kModule);
  write_report(dir, predictions, out);
  write_validation_sheet(o, dir, predictions);
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  auto a = metrics::report_from_json(text::read_file(require(o.report_a, "report A"), kModule));
  auto b = metrics::report_from_json(text::read_file(require(o.report_b, "report B"), kModule));
  out << metrics::format_deltas(metrics::compare_reports(a, b));
  return kExitOk;
}

int cmd_validate_sample(const Options& o, std::ostream& out) {
  auto predictions = pipeline::parse_jsonl(text::read_lines(predictions_path(o), kModule));
  auto sheet = validation::sample_for_validation(predictions, o.n, o.seed);
  validation::save_sheet(require(o.out, "--out"), sheet);
  out << fmt::format("wrote {} rows to {}\n", sheet.rows.size(), o.out);
  return kExitOk;
}

int cmd_validate_agreement(const Options& o, std::ostream& out) {
  auto sheet = validation::load_sheet(require(o.sheet, "--sheet"));
  auto a = validation::parse_csv(text::read_file(require(o.annotations_a, "--a"), kModule));
  auto b = validation::parse_csv(text::read_file(require(o.annotations_b, "--b"), kModule));
  auto predictions = pipeline::parse_jsonl(text::read_lines(predictions_path(o), kModule));
  auto report = validation::compute_agreement(sheet, a, b, predictions);
  out << validation::to_json(report);
  if (o.min_agreement) {
    const bool pass = report.human_vs_auto >= *o.min_agreement && report.inter_annotator >= *o.min_agreement;
    out << fmt::format("agreement threshold {:.1f}: {}\n", *o.min_agreement, pass ? "pass" : "fail");
    if (!pass) return kExitBatch;
  }
  return kExitOk;
}

int cmd_validate_annotate(const Options& o, std::ostream& out, std::istream& in) {
  const auto sheet_path = require(o.sheet, "--sheet");
  auto sheet = validation::load_sheet(sheet_path);
  auto rows = validation::annotate_interactive(sheet.rows, in, out);
  const auto target = o.out.empty() ? sheet_path : o.out;
  text::write_file(target, validation::to_csv(rows), kModule);
  out << fmt::format("\nsaved {}\n", target);
  return kExitOk;
}

void add_run_flags(CLI::App* cmd, Options& o, bool with_backend) {
  cmd->add_option("--corpus", o.corpus, "challenge set TSV");
  cmd->add_option("--lang", o.lang, "target language code");
  if (with_backend) cmd->add_option("--backend", o.backend, "file:<path> or http:<config.json>");
  cmd->add_option("--system", o.system, "system id (default: backend file stem)");
  cmd->add_option("--outdir", o.outdir, "artifact root")->capture_default_str();
  cmd->add_flag("--inject-adjectives", o.inject, "evaluate the adjective-injected corpus");
}

void add_aligner_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--aligner-iters", o.iterations, "EM iterations");
  cmd->add_option("--tension", o.tension, "initial diagonal tension");
  cmd->add_option("--p0", o.p0, "null alignment probability");
  cmd->add_flag("--freeze-tension", o.freeze_tension, "keep the tension fixed");
  cmd->add_option("--pool", o.pool, "extra translations TSV to train the aligner on (repeatable)");
  cmd->add_option("--model-out", o.model_out, "write the lexical table TSV here");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  Options o;
  CLI::App app{"Gender bias evaluation for machine translation", "mtgb"};
  app.require_subcommand(1);

  auto* corpus_cmd = app.add_subcommand("corpus", "challenge set tools");
  corpus_cmd->require_subcommand(1);
  auto* stats = corpus_cmd->add_subcommand("stats", "per-dataset gender counts");
  stats->add_option("--corpus", o.corpus, "challenge set TSV")->required();
  auto* inject = corpus_cmd->add_subcommand("inject", "write the adjective-injected corpus");
  inject->add_option("--corpus", o.corpus, "challenge set TSV")->required();
  inject->add_option("--out", o.out, "output TSV")->required();
  auto* ingest = corpus_cmd->add_subcommand("ingest", "convert upstream releases to the native TSV");
  ingest->add_option("--winogender", o.winogender, "all_sentences.tsv");
  ingest->add_option("--occupations", o.occupations, "occupation majority-gender TSV");
  ingest->add_option("--winobias-pro", o.winobias_pro, "pro-stereotyped WinoBias file (repeatable)");
  ingest->add_option("--winobias-anti", o.winobias_anti, "anti-stereotyped WinoBias file (repeatable)");
  ingest->add_option("--aggregate-winogender", o.aggregate_winogender, "aggregate-format WinoGender file");
  ingest->add_option("--aggregate-winobias", o.aggregate_winobias, "aggregate-format WinoBias file");
  ingest->add_option("--pro-list", o.pro_list, "aggregate-format pro-stereotyped lines");
  ingest->add_option("--anti-list", o.anti_list, "aggregate-format anti-stereotyped lines");
  ingest->add_option("--out", o.out, "output TSV")->required();

  auto* translate = app.add_subcommand("translate", "translate the corpus");
  add_run_flags(translate, o, true);
  translate->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();

  auto* align_cmd = app.add_subcommand("align", "train the aligner on a run's translations");
  add_run_flags(align_cmd, o, true);
  add_aligner_flags(align_cmd, o);

  auto* extract = app.add_subcommand("extract", "extract entity gender from aligned translations");
  add_run_flags(extract, o, true);
  extract->add_option("--lexicon", o.lexicon, "lexicon TSV merged over the bundled one");
  extract->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();

  auto* report = app.add_subcommand("report", "score a prediction dump");
  add_run_flags(report, o, true);
  report->add_option("--predictions", o.predictions, "predictions JSONL");

  auto* evaluate = app.add_subcommand("evaluate", "translate, align, extract and score");
  add_run_flags(evaluate, o, true);
  add_aligner_flags(evaluate, o);
  evaluate->add_option("--lexicon", o.lexicon, "lexicon TSV merged over the bundled one");
  evaluate->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
  evaluate->add_option("--seed", o.seed, "seed for the validation sample")->capture_default_str();
  evaluate->add_option("--validation-sample", o.validation_sample, "also write a validation sheet of this size");

  auto* compare = app.add_subcommand("compare", "metric deltas between two reports (b - a)");
  compare->add_option("a", o.report_a, "report.json")->required();
  compare->add_option("b", o.report_b, "report.json")->required();

  auto* validate = app.add_subcommand("validate", "human validation");
  validate->require_subcommand(1);
  auto* sample = validate->add_subcommand("sample", "sample predictions into an annotation sheet");
  add_run_flags(sample, o, true);
  sample->add_option("--predictions", o.predictions, "predictions JSONL");
  sample->add_option("--n", o.n, "rows")->capture_default_str();
  sample->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  sample->add_option("--out", o.out, "sheet CSV")->required();
  auto* agreement = validate->add_subcommand("agreement", "agreement of two annotators and the predictions");
  add_run_flags(agreement, o, true);
  agreement->add_option("--sheet", o.sheet, "sheet CSV")->required();
  agreement->add_option("--a", o.annotations_a, "annotator A CSV")->required();
  agreement->add_option("--b", o.annotations_b, "annotator B CSV")->required();
  agreement->add_option("--predictions", o.predictions, "predictions JSONL");
  agreement->add_option("--min-agreement", o.min_agreement, "exit 2 when either rate is below this percentage");
  auto* annotate = validate->add_subcommand("annotate", "label a sheet in the terminal");
  annotate->add_option("--sheet", o.sheet, "sheet CSV")->required();
  annotate->add_option("--out", o.out, "output CSV (default: overwrite the sheet)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (stats->parsed()) return cmd_corpus_stats(o, out);
    if (inject->parsed()) return cmd_corpus_inject(o, out);
    if (ingest->parsed()) return cmd_corpus_ingest(o, out);
    if (translate->parsed()) return cmd_translate(o, out);
    if (align_cmd->parsed()) return cmd_align(o, out);
    if (extract->parsed()) return cmd_extract(o, out);
    if (report->parsed()) return cmd_report(o, out);
    if (evaluate->parsed()) return cmd_evaluate(o, out);
    if (compare->parsed()) return cmd_compare(o, out);
    if (sample->parsed()) return cmd_validate_sample(o, out);
    if (agreement->parsed()) return cmd_validate_agreement(o, out);
    if (annotate->parsed()) return cmd_validate_annotate(o, out, in);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBatch;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBatch;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr, std::cin);
}

}  // namespace mtgb::cli
