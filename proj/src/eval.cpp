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

#include "chvenrich/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace chvenrich {

using nlohmann::json;

std::string to_string(DenominatorMode mode) {
  return mode == DenominatorMode::DetectedOnly ? "detected_only" : "all_evaluable";
}

DenominatorMode parse_denominator_mode(std::string_view text) {
  if (text == "detected_only" || text == "detected-only") return DenominatorMode::DetectedOnly;
  if (text == "all_evaluable" || text == "all-evaluable") return DenominatorMode::AllEvaluable;
  throw ValidationError({"denominator must be detected_only or all_evaluable, got '" +
                         std::string(text) + "'"});
}

std::vector<std::string> EvalConfig::violations() const {
  if (top_n < 1) return {"top_n >= 1"};
  return {};
}

ConceptScore score_concept(std::span<const std::string> retrieved,
                           const std::set<std::string>& targets, std::size_t top_n) {
  if (targets.empty()) throw Error("cannot score a concept with no target terms");
  if (top_n < 1) throw ValidationError({"top_n >= 1"});
  if (retrieved.size() > top_n) {
    throw Error("retrieved list longer than top_n (" + std::to_string(retrieved.size()) + " > " +
                std::to_string(top_n) + ")");
  }
  std::set<std::string_view> seen;
  ConceptScore s;
  for (std::size_t r = 0; r < retrieved.size(); ++r) {
    if (!seen.insert(retrieved[r]).second) {
      throw Error("duplicate retrieved term '" + retrieved[r] + "'");
    }
    if (targets.contains(retrieved[r])) {
      ++s.hits;
      if (s.first_hit_rank == 0) s.first_hit_rank = r + 1;
    }
  }
  s.precision = static_cast<double>(s.hits) / static_cast<double>(top_n);
  s.recall = static_cast<double>(s.hits) / static_cast<double>(targets.size());
  s.reciprocal_rank = s.first_hit_rank ? 1.0 / static_cast<double>(s.first_hit_rank) : 0.0;
  return s;
}

double f_score(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

namespace {

MetricSummary summarize(std::span<const ConceptRow> rows, bool detected_only) {
  MetricSummary m;
  double p = 0.0;
  double r = 0.0;
  double rr = 0.0;
  for (const auto& row : rows) {
    if (detected_only && row.score.hits == 0) continue;
    p += row.score.precision;
    r += row.score.recall;
    rr += row.score.reciprocal_rank;
    ++m.denominator;
  }
  if (m.denominator == 0) {
    m.no_detected_concepts = detected_only;
    return m;
  }
  const double n = static_cast<double>(m.denominator);
  m.precision = 100.0 * p / n;
  m.recall = 100.0 * r / n;
  m.mrr = rr / n;
  m.f_score = f_score(m.precision, m.recall);
  return m;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

json summary_json(const MetricSummary& m) {
  json j{{"precision", m.precision},
         {"recall", m.recall},
         {"f_score", m.f_score},
         {"mrr", m.mrr},
         {"precision_rounded", round2(m.precision)},
         {"recall_rounded", round2(m.recall)},
         {"f_score_rounded", round2(m.f_score)},
         {"mrr_rounded", round2(m.mrr)},
         {"denominator", m.denominator}};
  if (m.no_detected_concepts) j["warning"] = "no concept was detected";
  return j;
}

MetricSummary summary_from_json(const json& j) {
  MetricSummary m;
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f_score = j.at("f_score").get<double>();
  m.mrr = j.at("mrr").get<double>();
  m.denominator = j.at("denominator").get<std::size_t>();
  m.no_detected_concepts = j.contains("warning");
  return m;
}

}  // namespace

double EvalReport::mean_concepts_detected() const {
  if (detected_per_run.empty()) return static_cast<double>(concepts_detected);
  double sum = 0.0;
  for (auto d : detected_per_run) sum += static_cast<double>(d);
  return sum / static_cast<double>(detected_per_run.size());
}

EvalReport aggregate(std::span<const ConceptRow> rows, const EvalConfig& config) {
  if (auto v = config.violations(); !v.empty()) throw ValidationError(std::move(v));
  if (rows.empty()) throw Error("no concepts were scored");
  EvalReport report;
  report.config = config;
  report.rows.assign(rows.begin(), rows.end());
  report.concepts_scored = rows.size();
  for (const auto& row : rows) {
    if (row.score.hits > 0) ++report.concepts_detected;
  }
  report.detected_only = summarize(rows, true);
  report.all_evaluable = summarize(rows, false);
  report.detected_per_run = {report.concepts_detected};
  if (config.denominator == DenominatorMode::DetectedOnly && report.concepts_detected == 0) {
    log_warning("no concept had a hit; detected-only metrics are reported as 0");
  }
  return report;
}

EvalReport evaluate(const SimilarityIndex& index, std::span<const SeedAssignment> seeds,
                    const EvalConfig& config) {
  std::vector<ConceptRow> rows;
  rows.reserve(seeds.size());
  for (const auto& s : seeds) {
    ConceptRow row{s.cui, s.seed, {}, false};
    const std::set<std::string> targets(s.targets.begin(), s.targets.end());
    std::vector<std::string> retrieved;
    if (const auto id = index.lookup(s.seed)) {
      for (const auto& nb : index.top_similar(*id, config.top_n)) {
        retrieved.push_back(index.token(nb.id));
      }
    } else {
      row.seed_missing = true;
    }
    row.score = score_concept(retrieved, targets, config.top_n);
    rows.push_back(std::move(row));
  }
  return aggregate(rows, config);
}

EvalReport evaluate_runs(const SimilarityIndex& index, std::span<const SeedAssignment> seeds,
                         const EvalConfig& config, std::size_t runs, std::uint64_t rng_seed) {
  EvalReport report = evaluate(index, seeds, config);
  std::vector<Concept> concepts;
  for (const auto& s : seeds) {
    Concept c{s.cui, "", {s.seed}, {}};
    c.chv_terms.insert(c.chv_terms.end(), s.targets.begin(), s.targets.end());
    concepts.push_back(std::move(c));
  }
  for (std::size_t run = 1; run < runs; ++run) {
    const auto redrawn = assign_seeds(concepts, derive_seed(rng_seed, run));
    report.detected_per_run.push_back(evaluate(index, redrawn, config).concepts_detected);
  }
  return report;
}

json to_json(const EvalReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"cui", r.cui},
                    {"seed", r.seed},
                    {"hits", r.score.hits},
                    {"first_hit_rank", r.score.first_hit_rank},
                    {"precision", r.score.precision},
                    {"recall", r.score.recall},
                    {"reciprocal_rank", r.score.reciprocal_rank},
                    {"seed_missing", r.seed_missing}});
  }
  return json{{"format", "chv-enrich eval report v1"},
              {"config",
               {{"top_n", report.config.top_n},
                {"denominator_mode", to_string(report.config.denominator)}}},
              {"primary", summary_json(report.primary())},
              {"detected_only", summary_json(report.detected_only)},
              {"all_evaluable", summary_json(report.all_evaluable)},
              {"concepts_detected", report.concepts_detected},
              {"concepts_scored", report.concepts_scored},
              {"concepts_detected_per_run", report.detected_per_run},
              {"mean_concepts_detected", report.mean_concepts_detected()},
              {"per_concept", rows}};
}

EvalReport report_from_json(const json& j) {
  if (j.value("format", "") != "chv-enrich eval report v1") {
    throw Error("not a chv-enrich eval report (missing format tag)");
  }
  EvalReport r;
  r.config.top_n = j.at("config").at("top_n").get<std::size_t>();
  r.config.denominator =
      parse_denominator_mode(j.at("config").at("denominator_mode").get<std::string>());
  r.detected_only = summary_from_json(j.at("detected_only"));
  r.all_evaluable = summary_from_json(j.at("all_evaluable"));
  r.concepts_detected = j.at("concepts_detected").get<std::size_t>();
  r.concepts_scored = j.at("concepts_scored").get<std::size_t>();
  r.detected_per_run = j.at("concepts_detected_per_run").get<std::vector<std::size_t>>();
  for (const auto& row : j.at("per_concept")) {
    ConceptRow c;
    c.cui = row.at("cui").get<std::string>();
    c.seed = row.at("seed").get<std::string>();
    c.score.hits = row.at("hits").get<std::size_t>();
    c.score.first_hit_rank = row.at("first_hit_rank").get<std::size_t>();
    c.score.precision = row.at("precision").get<double>();
    c.score.recall = row.at("recall").get<double>();
    c.score.reciprocal_rank = row.at("reciprocal_rank").get<double>();
    c.seed_missing = row.at("seed_missing").get<bool>();
    r.rows.push_back(std::move(c));
  }
  return r;
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(report).dump(2) << '\n';
  if (!out) throw Error("write failure on " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open report " + path.string());
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Comparison compare_reports(const EvalReport& baseline, const EvalReport& variant) {
  if (!(baseline.config == variant.config)) {
    throw ValidationError({"reports were produced with different evaluation settings"});
  }
  const auto& b = baseline.primary();
  const auto& v = variant.primary();
  Comparison c;
  if (b.f_score != 0.0) c.relative_f_improvement = (v.f_score - b.f_score) / b.f_score;
  c.delta_precision = v.precision - b.precision;
  c.delta_recall = v.recall - b.recall;
  c.delta_f_score = v.f_score - b.f_score;
  c.delta_mrr = v.mrr - b.mrr;
  c.delta_concepts_detected = static_cast<long long>(variant.concepts_detected) -
                              static_cast<long long>(baseline.concepts_detected);
  return c;
}

std::string format_relative_improvement(const Comparison& comparison) {
  if (!comparison.relative_f_improvement) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", 100.0 * *comparison.relative_f_improvement);
  return buf;
}

json to_json(const Comparison& c) {
  json j{{"format", "chv-enrich comparison v1"},
         {"relative_f_improvement_text", format_relative_improvement(c)},
         {"delta_precision", c.delta_precision},
         {"delta_recall", c.delta_recall},
         {"delta_f_score", c.delta_f_score},
         {"delta_mrr", c.delta_mrr},
         {"delta_concepts_detected", c.delta_concepts_detected}};
  j["relative_f_improvement"] =
      c.relative_f_improvement ? json(*c.relative_f_improvement) : json("undefined");
  return j;
}

}  // namespace chvenrich
