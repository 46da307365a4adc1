// Copyright 2026 The bab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "bab/corpus.h"
#include "bab/report.h"
#include "bab/scoring.h"
#include "bab/version.h"
#include "synth.h"

namespace bab::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << content;
    if (!out.flush()) throw ValidationError("cannot write '" + path.string() + "'");
  }
  fs::rename(tmp, path);
}

CorpusFormat FormatFor(const fs::path& path, const std::string& flag) {
  if (!flag.empty()) return ParseCorpusFormat(flag);
  return path.extension() == ".tsv" ? CorpusFormat::kTsv : CorpusFormat::kJsonl;
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<const EvaluationSentence*> AllSentences(const Corpus& corpus) {
  std::vector<const EvaluationSentence*> out;
  for (const auto& p : corpus.pairs) {
    out.push_back(&p.left);
    out.push_back(&p.right);
  }
  for (const auto& s : corpus.unpaired) out.push_back(&s);
  return out;
}

std::string ListIds(const std::vector<const EvaluationSentence*>& sentences) {
  std::string out;
  for (size_t i = 0; i < sentences.size() && i < 10; ++i) {
    out += (i == 0 ? "" : ", ") + sentences[i]->id;
  }
  if (sentences.size() > 10) out += ", ...";
  return out;
}

// ---- ingest -------------------------------------------------------------------

struct IngestArgs {
  std::string in;
  std::string format;
  std::string out;
  std::string out_format = "jsonl";
};

int CmdIngest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus corpus = LoadCorpus(a.in, FormatFor(a.in, a.format));
  const std::string canonical = SerializeCorpus(corpus, ParseCorpusFormat(a.out_format));
  if (a.out.empty() || a.out == "-") {
    out << canonical;
  } else {
    WriteFile(a.out, canonical);
  }
  err << "ingested " << corpus.pairs.size() << " pairs and " << corpus.unpaired.size()
      << " unpaired sentences over " << corpus.dimensions.size() << " dimensions\n";
  return kExitOk;
}

// ---- score --------------------------------------------------------------------

struct ScoreArgs {
  std::string corpus;
  std::string corpus_format;
  std::string model_id;
  std::string endpoint;
  std::string mock;
  std::string score_file;
  std::string out;
  std::size_t batch = 64;
  std::size_t in_flight = 4;
  std::vector<int> backoff_ms = {500, 1000, 2000};
};

int CmdScore(ScoreArgs a, std::ostream& err, const EnvLookup& env) {
  const int explicit_sources = !a.endpoint.empty() + !a.mock.empty() + !a.score_file.empty();
  if (explicit_sources == 0) {
    if (auto e = env("BAB_ENDPOINT")) a.endpoint = *e;
  }
  if (!a.endpoint.empty() + !a.mock.empty() + !a.score_file.empty() != 1) {
    throw UsageError("give exactly one of --endpoint, --mock, --score-file");
  }
  if (a.out.empty()) {
    const auto cache = env("BAB_CACHE_DIR");
    if (!cache) throw UsageError("--out is required when BAB_CACHE_DIR is unset");
    a.out = (fs::path(*cache) / (a.model_id + ".scores.jsonl")).string();
  }
  if (const fs::path parent = fs::path(a.out).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }

  const Corpus corpus = LoadCorpus(a.corpus, FormatFor(a.corpus, a.corpus_format));
  ScoreStore store = LoadScores(a.out);
  std::vector<const EvaluationSentence*> missing;
  for (const EvaluationSentence* s : AllSentences(corpus)) {
    if (!store.Contains(s->id, a.model_id)) missing.push_back(s);
  }
  err << "model " << a.model_id << ": " << missing.size() << " of " << corpus.SentenceCount()
      << " sentences to score\n";

  if (!a.mock.empty()) {
    const MockScorerSpec spec = ParseMockSpec(ReadFile(a.mock));
    for (const EvaluationSentence* s : missing) {
      store.Insert({s->id, a.model_id, MockScore(spec, *s)});
    }
    missing.clear();
  } else if (!a.score_file.empty()) {
    if (!fs::exists(a.score_file)) {
      throw ValidationError("score file '" + a.score_file + "' not found");
    }
    const ScoreStore source = LoadScores(a.score_file);
    std::vector<const EvaluationSentence*> still_missing;
    for (const EvaluationSentence* s : missing) {
      if (auto o = source.Find(s->id, a.model_id)) {
        store.Insert({s->id, a.model_id, *o});
      } else {
        still_missing.push_back(s);
      }
    }
    missing = std::move(still_missing);
  } else {
    ClientOptions options;
    options.max_batch = a.batch;
    options.max_in_flight = a.in_flight;
    options.backoff.clear();
    for (int ms : a.backoff_ms) {
      if (ms < 0) throw UsageError("--backoff-ms values must be non-negative");
      options.backoff.emplace_back(ms);
    }
    const ScoringClient client(a.endpoint, options);
    // Save after every chunk so an interrupted run resumes where it stopped.
    const std::size_t chunk = a.batch * a.in_flight * 4;
    for (std::size_t begin = 0; begin < missing.size(); begin += chunk) {
      const std::size_t end = std::min(missing.size(), begin + chunk);
      std::vector<std::string> texts;
      for (std::size_t i = begin; i < end; ++i) texts.push_back(missing[i]->text);
      const auto outputs = client.ScoreAll(a.model_id, texts);
      for (std::size_t i = begin; i < end; ++i) {
        store.Insert({missing[i]->id, a.model_id, outputs[i - begin]});
      }
      SaveScores(store, a.out);
    }
    missing.clear();
  }
  SaveScores(store, a.out);
  if (!missing.empty()) {
    throw ValidationError("incomplete coverage for model '" + a.model_id + "': " +
                          std::to_string(missing.size()) + " sentences missing (" +
                          ListIds(missing) + ")");
  }
  return kExitOk;
}

// ---- audit --------------------------------------------------------------------

struct AuditArgs {
  std::string corpus;
  std::string corpus_format;
  std::vector<std::string> scores;
  std::vector<std::string> models;
  std::string profiles;
  std::string config;
  std::string format = "json";
  std::string out;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::optional<int> splits;
  std::optional<double> split_fraction;
  std::optional<double> alpha;
  std::optional<double> power_threshold;
  std::optional<int> quorum;
  std::optional<int> consolidation_reps;
  bool disjoint_splits = false;
  bool chi_square_full_corpus = false;
};

std::string FlagsJson(const AuditArgs& a) {
  json j = json::object();
  if (a.seed) j["seed"] = *a.seed;
  if (a.splits) j["n_splits"] = *a.splits;
  if (a.split_fraction) j["split_fraction"] = *a.split_fraction;
  if (a.alpha) j["alpha"] = *a.alpha;
  if (a.power_threshold) j["power_threshold"] = *a.power_threshold;
  if (a.quorum) j["consistency_quorum"] = *a.quorum;
  if (a.consolidation_reps) j["consolidation_repetitions"] = *a.consolidation_reps;
  if (a.disjoint_splits) j["disjoint_splits"] = true;
  if (a.chi_square_full_corpus) j["chi_square_full_corpus"] = true;
  return j.dump();
}

int CmdAudit(const AuditArgs& a, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  const ReportFormat format = ParseReportFormat(a.format);
  const std::optional<fs::path> config_path =
      a.config.empty() ? std::nullopt : std::optional<fs::path>(a.config);
  const AuditConfig config = ResolveConfig(config_path, FlagsJson(a), env);

  const Corpus corpus = LoadCorpus(a.corpus, FormatFor(a.corpus, a.corpus_format));
  ScoreStore store;
  for (const auto& path : a.scores) {
    if (!fs::exists(path)) throw ValidationError("score store '" + path + "' not found");
    MergeScores(path, &store);
  }
  std::vector<std::string> model_ids = a.models.empty() ? store.ModelIds() : a.models;
  if (model_ids.empty()) throw ValidationError("no models found in the score stores");
  std::vector<ModelScores> models;
  for (const auto& id : model_ids) {
    models.push_back(store.ForModel(id));
    if (models.back().by_sentence.empty()) {
      throw ValidationError("model '" + id + "' has no scores");
    }
  }
  std::vector<DeveloperProfile> profiles;
  if (!a.profiles.empty()) profiles = LoadProfiles(a.profiles);

  // The manifest goes out before any result.
  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && !a.out.empty() && a.out != "-") {
    manifest_path = a.out + ".manifest.json";
  }
  if (!manifest_path.empty()) {
    ordered_json m;
    m["toolkit_version"] = kVersion;
    m["command"] = "audit";
    m["started_at"] = UtcNow();
    m["config_path"] = a.config.empty() ? ordered_json(nullptr) : ordered_json(a.config);
    m["config"] = ordered_json::parse(SerializeConfig(config));
    ordered_json inputs;
    inputs["corpus"] = {{"path", a.corpus}, {"digest", FileDigest(a.corpus)}};
    inputs["scores"] = ordered_json::array();
    for (const auto& p : a.scores) {
      inputs["scores"].push_back({{"path", p}, {"digest", FileDigest(p)}});
    }
    inputs["profiles"] = a.profiles.empty()
                             ? ordered_json(nullptr)
                             : ordered_json{{"path", a.profiles}, {"digest", FileDigest(a.profiles)}};
    m["inputs"] = inputs;
    m["models"] = model_ids;
    m["outputs"] = {{"report", a.out.empty() ? "-" : a.out},
                    {"format", std::string(ReportFormatName(format))}};
    WriteFile(manifest_path, m.dump(2) + "\n");
  }

  const std::vector<BiasVerdict> verdicts = RunAudit(models, corpus, config);
  std::vector<Rq2Result> rq2;
  if (!profiles.empty()) {
    for (const auto& dim : corpus.dimensions) {
      bool any = false;
      for (const auto& v : verdicts) {
        if (v.dimension != dim.name) continue;
        for (const auto& p : profiles) {
          any = any || (p.dataset_id == v.dataset_id && !p.GroupLabel(dim.name).empty());
        }
      }
      if (any) rq2.push_back(RunRq2(verdicts, profiles, dim, config.alpha));
    }
  }
  Provenance provenance;
  provenance.corpus_id = fs::path(a.corpus).filename().string();
  provenance.corpus_digest = FileDigest(a.corpus);
  provenance.model_ids = model_ids;
  provenance.toolkit_version = kVersion;
  const AuditReport report = BuildReport(verdicts, rq2, std::move(provenance));
  const std::string rendered = Render(report, format);
  if (a.out.empty() || a.out == "-") {
    out << rendered;
  } else {
    WriteFile(a.out, rendered);
  }
  err << "audited " << models.size() << " models over " << corpus.dimensions.size()
      << " dimensions\n";
  return kExitOk;
}

// ---- render / synth -------------------------------------------------------------

struct RenderArgs {
  std::string report;
  std::string format = "markdown";
  std::string out;
};

int CmdRender(const RenderArgs& a, std::ostream& out) {
  const AuditReport report = ParseReportJson(ReadFile(a.report));
  const std::string rendered = Render(report, ParseReportFormat(a.format));
  if (a.out.empty() || a.out == "-") {
    out << rendered;
  } else {
    WriteFile(a.out, rendered);
  }
  return kExitOk;
}

int CmdSynth(const synth::FixtureOptions& options, const std::string& dir, std::ostream& err) {
  const synth::Fixture f = synth::MakeFixture(options);
  synth::WriteFixture(f, dir);
  err << "wrote " << f.corpus.SentenceCount() << " sentences and " << f.models.size()
      << " mock models to " << dir << "\n";
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kValidation:
      return kExitValidation;
    case ErrorKind::kTransport:
      return kExitTransport;
    case ErrorKind::kInternal:
      return kExitInternal;
  }
  return kExitInternal;
}

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

std::string Sha256Digest(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kInternal, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

std::string FileDigest(const std::filesystem::path& path) { return Sha256Digest(ReadFile(path)); }

AuditConfig ResolveConfig(const std::optional<std::filesystem::path>& config_path,
                          std::string_view flags_json, const EnvLookup& env) {
  json merged = json::object();
  const json defaults = json::parse(SerializeConfig(AuditConfig{}));
  for (const auto& [key, value] : defaults.items()) {
    std::string var = "BAB_";
    for (char c : key) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto raw = env(var);
    if (!raw) continue;
    try {
      merged[key] = json::parse(*raw);
    } catch (const json::parse_error&) {
      throw UsageError("environment variable " + var + " is not a JSON value: '" + *raw + "'");
    }
  }
  if (config_path) {
    json file;
    try {
      file = json::parse(ReadFile(*config_path));
    } catch (const json::parse_error& e) {
      throw UsageError("config file '" + config_path->string() + "' is not valid JSON: " +
                       e.what());
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
    if (!file.is_object()) throw UsageError("config file must hold a JSON object");
    merged.update(file);
  }
  merged.update(json::parse(flags_json));
  return ParseConfig(merged.dump());
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env) {
  CLI::App app{"Paired-query bias audit for binary sentiment scorers", "bab"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Validate a corpus and write it in canonical form");
  ingest->add_option("--in", ingest_args.in, "Corpus file")->required();
  ingest->add_option("--format", ingest_args.format, "jsonl or tsv (default: by extension)");
  ingest->add_option("--out", ingest_args.out, "Output file (default: stdout)");
  ingest->add_option("--out-format", ingest_args.out_format, "jsonl or tsv");

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "Build or extend a score store for one model");
  score->add_option("--corpus", score_args.corpus, "Corpus file")->required();
  score->add_option("--corpus-format", score_args.corpus_format, "jsonl or tsv");
  score->add_option("--model-id", score_args.model_id, "Model id, e.g. D1-mBERT")->required();
  score->add_option("--endpoint", score_args.endpoint,
                    "Scoring service base URL (env BAB_ENDPOINT)");
  score->add_option("--mock", score_args.mock, "Mock scorer spec (JSON)");
  score->add_option("--score-file", score_args.score_file, "Import from an existing score store");
  score->add_option("--out", score_args.out,
                    "Score store to create or resume (default: $BAB_CACHE_DIR/<model>.scores.jsonl)");
  score->add_option("--batch", score_args.batch, "Texts per request")->check(CLI::PositiveNumber);
  score->add_option("--in-flight", score_args.in_flight, "Concurrent requests")
      ->check(CLI::PositiveNumber);
  score->add_option("--backoff-ms", score_args.backoff_ms, "Retry delays in milliseconds")
      ->delimiter(',');

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Run the audit and write a report");
  audit->add_option("--corpus", audit_args.corpus, "Corpus file")->required();
  audit->add_option("--corpus-format", audit_args.corpus_format, "jsonl or tsv");
  audit->add_option("--scores", audit_args.scores, "Score store (repeatable)")->required();
  audit->add_option("--model", audit_args.models, "Restrict to these model ids (repeatable)");
  audit->add_option("--profiles", audit_args.profiles, "Developer profiles (enables RQ2)");
  audit->add_option("--config", audit_args.config, "Audit config JSON");
  audit->add_option("--format", audit_args.format, "json, csv, or markdown");
  audit->add_option("--out", audit_args.out, "Report path (default: stdout)");
  audit->add_option("--manifest", audit_args.manifest,
                    "Manifest path (default: <out>.manifest.json)");
  audit->add_option("--seed", audit_args.seed, "Split seed");
  audit->add_option("--splits", audit_args.splits, "Number of splits");
  audit->add_option("--split-fraction", audit_args.split_fraction, "Fraction of pairs per split");
  audit->add_option("--alpha", audit_args.alpha, "Significance level");
  audit->add_option("--power-threshold", audit_args.power_threshold, "Minimum post-hoc power");
  audit->add_option("--quorum", audit_args.quorum, "Splits needed to declare a direction");
  audit->add_option("--consolidation-reps", audit_args.consolidation_reps,
                    "Unpaired consolidation repetitions per split");
  audit->add_flag("--disjoint-splits", audit_args.disjoint_splits, "Use disjoint folds");
  audit->add_flag("--chi-square-full-corpus", audit_args.chi_square_full_corpus,
                  "Nominal test on the whole corpus instead of per split");

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "Re-render a JSON report");
  render->add_option("--report", render_args.report, "JSON report")->required();
  render->add_option("--format", render_args.format, "json, csv, or markdown");
  render->add_option("--out", render_args.out, "Output path (default: stdout)");

  synth::FixtureOptions synth_options;
  std::string synth_dir;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus, mock models, and scores");
  synth_cmd->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth_cmd->add_option("--seed", synth_options.seed, "Seed");
  synth_cmd->add_option("--pairs", synth_options.pairs_per_dimension, "Pairs per dimension");
  synth_cmd->add_option("--unpaired", synth_options.unpaired_per_category,
                        "Unpaired sentences per category (last dimension)");
  synth_cmd->add_option("--datasets", synth_options.datasets, "Number of datasets");
  synth_cmd->add_option("--bases", synth_options.bases, "Model base names")->delimiter(',');

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return CmdIngest(ingest_args, out, err);
    if (*score) return CmdScore(score_args, err, env);
    if (*audit) return CmdAudit(audit_args, out, err, env);
    if (*render) return CmdRender(render_args, out);
    if (*synth_cmd) return CmdSynth(synth_options, synth_dir, err);
  } catch (const Error& e) {
    err << "bab: error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "bab: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace bab::cli
