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

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chvenrich/chv.hpp"
#include "chvenrich/simindex.hpp"
#include "json.hpp"

namespace chvenrich {

// Which concepts the macro averages run over: only those with at least one
// hit, or every scored concept.
enum class DenominatorMode { DetectedOnly, AllEvaluable };

std::string to_string(DenominatorMode mode);
DenominatorMode parse_denominator_mode(std::string_view text);

struct EvalConfig {
  std::size_t top_n = 10;
  DenominatorMode denominator = DenominatorMode::DetectedOnly;

  std::vector<std::string> violations() const;
  bool operator==(const EvalConfig&) const = default;
};

// Fractions in [0, 1]; first_hit_rank is 1-based, 0 when nothing was hit.
struct ConceptScore {
  double precision = 0.0;
  double recall = 0.0;
  double reciprocal_rank = 0.0;
  std::size_t hits = 0;
  std::size_t first_hit_rank = 0;

  bool operator==(const ConceptScore&) const = default;
};

// precision = hits / top_n, recall = hits / |targets|. Throws Error for
// empty targets, duplicates in retrieved, or more than top_n retrieved.
ConceptScore score_concept(std::span<const std::string> retrieved,
                           const std::set<std::string>& targets, std::size_t top_n);

struct ConceptRow {
  std::string cui;
  std::string seed;
  ConceptScore score;
  // Seed absent from the embeddings; scored as a miss.
  bool seed_missing = false;
};

// Percentages for precision, recall and F; MRR in [0, 1].
struct MetricSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double mrr = 0.0;
  std::size_t denominator = 0;
  // Set in detected-only mode when no concept was detected.
  bool no_detected_concepts = false;
};

struct EvalReport {
  EvalConfig config;
  MetricSummary detected_only;
  MetricSummary all_evaluable;
  std::size_t concepts_detected = 0;
  std::size_t concepts_scored = 0;
  std::vector<ConceptRow> rows;
  // Repeated seed draws (eval --runs); run 0 is the given assignment.
  std::vector<std::size_t> detected_per_run;

  const MetricSummary& primary() const {
    return config.denominator == DenominatorMode::DetectedOnly ? detected_only : all_evaluable;
  }
  double mean_concepts_detected() const;
};

// Harmonic mean 2PR/(P+R), 0 when P + R = 0.
double f_score(double precision, double recall);

// Macro averages of per-concept P, R and RR over the denominator set, with F
// taken from the averaged P and R. Both modes are always filled in.
EvalReport aggregate(std::span<const ConceptRow> rows, const EvalConfig& config);

EvalReport evaluate(const SimilarityIndex& index, std::span<const SeedAssignment> seeds,
                    const EvalConfig& config);

// Scores the given assignment, then runs - 1 more random re-draws of the seed
// from each concept's terms, recording concepts_detected per run. The report's
// metrics are those of the given assignment.
EvalReport evaluate_runs(const SimilarityIndex& index, std::span<const SeedAssignment> seeds,
                         const EvalConfig& config, std::size_t runs, std::uint64_t rng_seed);

nlohmann::json to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

struct Comparison {
  // (F_variant - F_baseline) / F_baseline; empty when F_baseline is 0.
  std::optional<double> relative_f_improvement;
  double delta_precision = 0.0;
  double delta_recall = 0.0;
  double delta_f_score = 0.0;
  double delta_mrr = 0.0;
  long long delta_concepts_detected = 0;
};

// Compares the primary metrics. Throws ValidationError when the reports were
// produced with different EvalConfigs.
Comparison compare_reports(const EvalReport& baseline, const EvalReport& variant);

// "+8.7%" style, one decimal; "undefined" when there is no baseline F.
std::string format_relative_improvement(const Comparison& comparison);
nlohmann::json to_json(const Comparison& comparison);

}  // namespace chvenrich
