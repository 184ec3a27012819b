// Copyright 2026 The chv-enrich Authors. All Rights Reserved.
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

#include "chvenrich/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "chvenrich/chv.hpp"
#include "chvenrich/cooccur.hpp"
#include "chvenrich/embeddings.hpp"
#include "chvenrich/enrich.hpp"
#include "chvenrich/preprocess.hpp"
#include "chvenrich/simindex.hpp"
#include "chvenrich/trainer.hpp"
#include "chvenrich/vocab.hpp"

namespace chvenrich {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> kStages{
      "preprocess", "vocab",  "cooccur",      "ground-truth", "train",
      "eval-baseline", "enrich", "eval-gloveif", "compare"};
  return kStages;
}

const std::vector<std::string>& pipeline_artifacts() {
  static const std::vector<std::string> kArtifacts{
      "corpus.txt",  "vocab.tsv",      "cooccur.tsv",    "seeds.tsv",          "baseline.vec",
      "baseline_report.json", "gloveif.vec", "candidates.tsv", "gloveif_report.json"};
  return kArtifacts;
}

namespace {

ArtifactRecord record(const fs::path& dir, const std::string& name) {
  const fs::path p = dir / name;
  return {name, p, sha256_file(p), fs::file_size(p)};
}

void write_manifest(const fs::path& path, const RunConfig& config, const PipelineResult& result,
                    const std::string& status, const std::string& failed_stage,
                    const std::string& error) {
  json j;
  j["format"] = "chv-enrich manifest v1";
  j["status"] = status;
  j["failed_stage"] = failed_stage.empty() ? json(nullptr) : json(failed_stage);
  j["error"] = error.empty() ? json(nullptr) : json(error);
  const std::string text = config.to_text();
  j["config"] = text;
  j["config_hash"] = sha256_hex(text);
  j["rng_seed"] = config.rng_seed;
  j["threads"] = config.threads;
  auto files = [](const std::vector<ArtifactRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
      arr.push_back({{"name", r.name}, {"sha256", r.sha256}, {"bytes", r.bytes}});
    }
    return arr;
  };
  j["artifacts"] = files(result.artifacts);
  j["logs"] = files(result.logs);
  json timings = json::array();
  for (const auto& t : result.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["timings"] = timings;
  if (result.comparison) {
    json c = to_json(*result.comparison);
    c["relative_f_improvement_text"] = format_relative_improvement(*result.comparison);
    j["comparison"] = c;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  const fs::path dir = config.workdir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StageError("setup", "cannot create workdir " + dir.string() + ": " + ec.message());

  PipelineResult result;
  result.manifest = dir / "manifest.json";

  auto stage = [&](const std::string& name, const std::function<void()>& body) {
    log_info("stage " + name);
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      std::string message = e.what();
      if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        message.clear();
        for (const auto& s : v->violations()) message += (message.empty() ? "" : "; ") + s;
      }
      write_manifest(result.manifest, config, result, "failed", name, message);
      throw StageError(name, message);
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    result.timings.push_back({name, took.count()});
  };

  HyperParams hp = config.hp;
  hp.threads = config.threads;
  hp.rng_seed = derive_seed(config.rng_seed, "train");

  std::vector<Document> docs;
  Vocabulary vocab;
  CooccurrenceMatrix matrix;
  std::vector<SeedAssignment> seeds;
  EvalReport baseline_report;
  EvalReport gloveif_report;
  const std::uint64_t eval_seed = derive_seed(config.rng_seed, "eval");

  stage("preprocess", [&] {
    if (!fs::is_regular_file(config.corpus)) {
      throw Error("corpus not found: " + config.corpus.string());
    }
    const TokenCleaner cleaner(config.cleaning_config());
    docs = tokenize_corpus(config.corpus, cleaner, config.threads);
    write_documents(dir / "corpus.txt", docs);
    result.artifacts.push_back(record(dir, "corpus.txt"));
  });
  stage("vocab", [&] {
    vocab = build_vocabulary(docs, config.min_count);
    vocab.save(dir / "vocab.tsv");
    result.artifacts.push_back(record(dir, "vocab.tsv"));
  });
  stage("cooccur", [&] {
    matrix = build_matrix(docs, vocab, config.window, config.threads);
    docs.clear();
    docs.shrink_to_fit();
    matrix.save_tsv(dir / "cooccur.tsv");
    result.artifacts.push_back(record(dir, "cooccur.tsv"));
  });
  stage("ground-truth", [&] {
    if (config.concepts.empty()) throw Error("no concepts file configured");
    if (!fs::is_regular_file(config.concepts)) {
      throw Error("concepts file not found: " + config.concepts.string());
    }
    const TokenCleaner cleaner(config.cleaning_config());
    const auto concepts = load_concepts(config.concepts, cleaner);
    const auto kept = filter_ground_truth(concepts, vocab, config.ground_truth);
    log_info(std::to_string(kept.size()) + " of " + std::to_string(concepts.size()) +
             " concepts are evaluable");
    seeds = assign_seeds(kept, derive_seed(config.rng_seed, "ground-truth"));
    save_seeds(seeds, dir / "seeds.tsv");
    result.artifacts.push_back(record(dir, "seeds.tsv"));
  });
  WordVectors baseline;
  stage("train", [&] {
    const auto trained = train(matrix, hp);
    baseline = to_word_vectors(trained.model, vocab, hp.vectors);
    save_word_vectors(baseline, dir / "baseline.vec");
    save_training_log(trained.epochs, dir / "baseline_train.jsonl");
    result.artifacts.push_back(record(dir, "baseline.vec"));
    result.logs.push_back(record(dir, "baseline_train.jsonl"));
  });
  stage("eval-baseline", [&] {
    const SimilarityIndex index(baseline);
    baseline_report = evaluate_runs(index, seeds, config.eval, config.eval_runs, eval_seed);
    save_report(baseline_report, dir / "baseline_report.json");
    result.artifacts.push_back(record(dir, "baseline_report.json"));
  });
  WordVectors enriched;
  stage("enrich", [&] {
    auto gif = run_gloveif(matrix, vocab, seeds, hp, config.feedback);
    enriched = std::move(gif.vectors);
    save_word_vectors(enriched, dir / "gloveif.vec");
    export_candidates(gif.candidates, dir / "candidates.tsv");
    save_training_log(gif.training.epochs, dir / "gloveif_train.jsonl");
    result.artifacts.push_back(record(dir, "gloveif.vec"));
    result.artifacts.push_back(record(dir, "candidates.tsv"));
    result.logs.push_back(record(dir, "gloveif_train.jsonl"));
  });
  stage("eval-gloveif", [&] {
    const SimilarityIndex index(enriched);
    gloveif_report = evaluate_runs(index, seeds, config.eval, config.eval_runs, eval_seed);
    save_report(gloveif_report, dir / "gloveif_report.json");
    result.artifacts.push_back(record(dir, "gloveif_report.json"));
  });
  stage("compare", [&] {
    result.comparison = compare_reports(baseline_report, gloveif_report);
    log_info("relative F improvement " + format_relative_improvement(*result.comparison));
  });

  write_manifest(result.manifest, config, result, "ok", "", "");
  return result;
}

}  // namespace chvenrich
