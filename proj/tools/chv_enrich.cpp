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

// chv-enrich: command-line front end for the enrichment pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chvenrich/chv.hpp"
#include "chvenrich/config.hpp"
#include "chvenrich/cooccur.hpp"
#include "chvenrich/embeddings.hpp"
#include "chvenrich/enrich.hpp"
#include "chvenrich/eval.hpp"
#include "chvenrich/pipeline.hpp"
#include "chvenrich/preprocess.hpp"
#include "chvenrich/simindex.hpp"
#include "chvenrich/synth.hpp"
#include "chvenrich/trainer.hpp"
#include "chvenrich/vocab.hpp"

namespace fs = std::filesystem;
using namespace chvenrich;

namespace {

struct CleaningArgs {
  std::string stopwords;
  std::string med_stopwords;
  bool no_stem = false;
  std::size_t min_len = 3;

  void add_to(CLI::App* app) {
    app->add_option("--stopwords", stopwords, "standard stopword file (default: built-in)");
    app->add_option("--med-stopwords", med_stopwords, "medical stopword file (default: built-in)");
    app->add_flag("--no-stem", no_stem, "disable Porter stemming");
    app->add_option("--min-len", min_len, "minimum token length after stemming")
        ->capture_default_str();
  }

  CleaningConfig build() const {
    CleaningConfig c = default_cleaning_config();
    c.min_token_length = min_len;
    c.stemming_enabled = !no_stem;
    if (!stopwords.empty()) c.standard_stopwords = load_stopwords(stopwords);
    if (!med_stopwords.empty()) c.medical_stopwords = load_stopwords(med_stopwords);
    if (auto v = c.violations(); !v.empty()) throw ValidationError(std::move(v));
    return c;
  }
};

struct TrainArgs {
  HyperParams hp;
  std::string vectors = "sum";

  void add_to(CLI::App* app) {
    app->add_option("--dim", hp.dim, "embedding dimension")->capture_default_str();
    app->add_option("--epochs", hp.epochs, "training epochs")->capture_default_str();
    app->add_option("--x-max", hp.x_max, "weighting cutoff")->capture_default_str();
    app->add_option("--alpha", hp.alpha, "weighting exponent")->capture_default_str();
    app->add_option("--learning-rate", hp.learning_rate, "AdaGrad step size")
        ->capture_default_str();
    app->add_option("--clip", hp.clip, "bound on the weighted residual")->capture_default_str();
    app->add_option("--vectors", vectors, "output vectors: sum or main")
        ->check(CLI::IsMember({"sum", "main"}))
        ->capture_default_str();
  }

  HyperParams build(std::uint64_t seed, unsigned threads) const {
    HyperParams h = hp;
    h.vectors = vectors == "main" ? VectorMode::Main : VectorMode::Sum;
    h.rng_seed = derive_seed(seed, "train");
    h.threads = threads;
    if (auto v = h.violations(); !v.empty()) throw ValidationError(std::move(v));
    return h;
  }
};

void log_epoch(const EpochStats& s) {
  char line[128];
  std::snprintf(line, sizeof line, "epoch %d  J %.6g  %.2fs", s.epoch, s.cost, s.seconds);
  log_info(line);
}

// Every flag of every subcommand, for the --help footer.
std::string flag_listing(const CLI::App& app) {
  std::ostringstream out;
  out << "\nFlags by subcommand:\n";
  for (const CLI::App* sub : app.get_subcommands({})) {
    out << "  " << sub->get_name() << ':';
    for (const CLI::Option* opt : sub->get_options()) {
      for (const auto& name : opt->get_lnames()) out << " --" << name;
    }
    out << '\n';
  }
  out << "Exit codes: 0 success, 1 validation error, 2 runtime error.\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consumer health vocabulary enrichment with GloVe and iterative feedback"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads (1 = fully deterministic)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "clean a raw corpus, one document per line");
  std::string pre_corpus, pre_out;
  CleaningArgs pre_clean;
  pre->add_option("--corpus", pre_corpus, "raw UTF-8 corpus")->required();
  pre_clean.add_to(pre);
  pre->add_option("--out", pre_out, "cleaned corpus output")->required();

  // vocab
  auto* voc = app.add_subcommand("vocab", "build the vocabulary from a cleaned corpus");
  std::string voc_corpus, voc_out;
  std::uint64_t voc_min_count = 5;
  voc->add_option("--corpus", voc_corpus, "cleaned corpus")->required();
  voc->add_option("--min-count", voc_min_count, "minimum token frequency")->capture_default_str();
  voc->add_option("--out", voc_out, "vocabulary TSV output")->required();

  // cooccur
  auto* coo = app.add_subcommand("cooccur", "count windowed co-occurrences");
  std::string coo_corpus, coo_vocab, coo_out;
  std::size_t coo_window = 10;
  bool coo_binary = false;
  coo->add_option("--corpus", coo_corpus, "cleaned corpus")->required();
  coo->add_option("--vocab", coo_vocab, "vocabulary TSV")->required();
  coo->add_option("--window", coo_window, "symmetric window size")->capture_default_str();
  coo->add_flag("--binary", coo_binary, "write the binary matrix format");
  coo->add_option("--out", coo_out, "matrix output")->required();

  // ground-truth
  auto* gt = app.add_subcommand("ground-truth", "filter concepts and draw one seed per concept");
  std::string gt_concepts, gt_vocab, gt_out;
  GroundTruthOptions gt_opts;
  std::uint64_t gt_seed = 0;
  CleaningArgs gt_clean;
  gt->add_option("--concepts", gt_concepts, "concepts TSV")->required();
  gt->add_option("--vocab", gt_vocab, "vocabulary TSV")->required();
  gt->add_option("--min-term-count", gt_opts.min_term_count, "corpus frequency per term")
      ->capture_default_str();
  gt->add_option("--min-terms", gt_opts.min_terms, "terms left per concept")
      ->capture_default_str();
  gt->add_option("--rng-seed", gt_seed, "run seed")->required();
  gt_clean.add_to(gt);
  gt->add_option("--out", gt_out, "seed assignment TSV output")->required();

  // train
  auto* tr = app.add_subcommand("train", "train GloVe vectors on a matrix");
  std::string tr_matrix, tr_vocab, tr_out, tr_log;
  std::uint64_t tr_seed = 0;
  TrainArgs tr_args;
  tr->add_option("--matrix", tr_matrix, "co-occurrence matrix")->required();
  tr->add_option("--vocab", tr_vocab, "vocabulary TSV")->required();
  tr_args.add_to(tr);
  tr->add_option("--rng-seed", tr_seed, "run seed")->required();
  tr->add_option("--out", tr_out, "embedding output")->required();
  tr->add_option("--log", tr_log, "per-epoch JSON lines log");

  // query
  auto* qu = app.add_subcommand("query", "nearest neighbours of a token");
  std::string qu_emb, qu_token;
  std::size_t qu_n = 10;
  qu->add_option("--embeddings", qu_emb, "embedding file")->required();
  qu->add_option("--token", qu_token, "query token (cleaned form)")->required();
  qu->add_option("--top-n", qu_n, "neighbours to print")->capture_default_str();

  // enrich
  auto* en = app.add_subcommand("enrich", "GloVe with iterative feedback");
  std::string en_matrix, en_vocab, en_seeds, en_cands, en_emb, en_log;
  std::string en_boost = "row-mean:1.0", en_pairs = "seed-candidate";
  std::size_t en_window = 0;
  std::uint64_t en_seed = 0;
  FeedbackConfig en_fc;
  TrainArgs en_args;
  en->add_option("--matrix", en_matrix, "co-occurrence matrix")->required();
  en->add_option("--vocab", en_vocab, "vocabulary TSV")->required();
  en->add_option("--seeds", en_seeds, "seed assignment TSV")->required();
  en->add_option("--window", en_window, "expected window of the matrix (checked)");
  en_args.add_to(en);
  en->add_option("--top-n", en_fc.top_n, "neighbours per seed")->capture_default_str();
  en->add_option("--top-k", en_fc.top_k, "neighbours per candidate")->capture_default_str();
  en->add_option("--rounds", en_fc.rounds, "feedback rounds")->capture_default_str();
  en->add_option("--boost", en_boost, "row-mean:<beta> or constant:<c>")->capture_default_str();
  en->add_option("--boost-pairs", en_pairs, "seed-candidate or all")
      ->check(CLI::IsMember({"seed-candidate", "all"}))
      ->capture_default_str();
  en->add_option("--rng-seed", en_seed, "run seed")->required();
  en->add_option("--out-candidates", en_cands, "candidate TSV output")->required();
  en->add_option("--out-embeddings", en_emb, "final embedding output");
  en->add_option("--log", en_log, "per-epoch JSON lines log of the final retrain");

  // eval
  auto* ev = app.add_subcommand("eval", "score embeddings against seed assignments");
  std::string ev_emb, ev_seeds, ev_out, ev_denom = "detected_only";
  EvalConfig ev_cfg;
  std::size_t ev_runs = 1;
  std::uint64_t ev_seed = 0;
  ev->add_option("--embeddings", ev_emb, "embedding file")->required();
  ev->add_option("--seeds", ev_seeds, "seed assignment TSV")->required();
  ev->add_option("--top-n", ev_cfg.top_n, "retrieved list length")->capture_default_str();
  ev->add_option("--denominator", ev_denom, "detected_only or all_evaluable")
      ->capture_default_str();
  ev->add_option("--runs", ev_runs, "seed re-draws for concepts_detected")->capture_default_str();
  ev->add_option("--rng-seed", ev_seed, "run seed for re-draws")->capture_default_str();
  ev->add_option("--out", ev_out, "JSON report output")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "relative improvement between two reports");
  std::string cmp_base, cmp_var, cmp_out;
  cmp->add_option("--baseline", cmp_base, "baseline report")->required();
  cmp->add_option("--variant", cmp_var, "variant report")->required();
  cmp->add_option("--out", cmp_out, "write the comparison JSON here as well");

  // run
  auto* run = app.add_subcommand("run", "full pipeline from a config file");
  std::string run_config;
  std::vector<std::string> run_sets;
  std::string run_corpus, run_concepts, run_workdir;
  std::uint64_t run_seed = 0;
  bool run_check = false;
  run->add_option("--config", run_config, "key = value config file");
  run->add_option("--set", run_sets, "override key=value (repeatable)");
  run->add_option("--corpus", run_corpus, "override corpus");
  run->add_option("--concepts", run_concepts, "override concepts");
  run->add_option("--workdir", run_workdir, "override workdir");
  auto* run_seed_opt = run->add_option("--rng-seed", run_seed, "override rng_seed");
  run->add_flag("--check", run_check, "validate and print the config, then stop");

  // synth
  auto* sy = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string sy_kind = "planted", sy_out, sy_concepts;
  PlantedCorpusOptions sy_opts;
  sy->add_option("--kind", sy_kind, "planted or zipf")
      ->check(CLI::IsMember({"planted", "zipf"}))
      ->capture_default_str();
  sy->add_option("--tokens", sy_opts.target_tokens, "approximate token count")
      ->capture_default_str();
  sy->add_option("--vocab-size", sy_opts.vocab_size, "background vocabulary")
      ->capture_default_str();
  sy->add_option("--pairs", sy_opts.pairs, "planted synonym pairs")->capture_default_str();
  sy->add_option("--contexts", sy_opts.contexts_per_pair, "context words per planted pair")
      ->capture_default_str();
  sy->add_option("--mention-rate", sy_opts.mention_rate, "share of planted mention blocks")
      ->capture_default_str();
  sy->add_option("--seed", sy_opts.seed, "generator seed")->capture_default_str();
  sy->add_option("--out", sy_out, "corpus output")->required();
  sy->add_option("--out-concepts", sy_concepts, "concepts TSV for the planted pairs");

  app.footer(flag_listing(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*pre) {
      const TokenCleaner cleaner(pre_clean.build());
      const auto docs = tokenize_corpus(pre_corpus, cleaner, threads);
      write_documents(pre_out, docs);
      log_info("wrote " + std::to_string(docs.size()) + " documents to " + pre_out);
    } else if (*voc) {
      if (voc_min_count < 1) throw ValidationError({"min_count >= 1"});
      const auto docs = read_documents(voc_corpus);
      const auto vocab = build_vocabulary(docs, voc_min_count);
      vocab.save(voc_out);
      log_info("vocabulary size " + std::to_string(vocab.size()));
    } else if (*coo) {
      if (coo_window < 1 || coo_window > kMaxWindowSize) {
        throw ValidationError({"1 <= window <= " + std::to_string(kMaxWindowSize)});
      }
      const auto docs = read_documents(coo_corpus);
      const auto vocab = Vocabulary::load(coo_vocab);
      const auto matrix = build_matrix(docs, vocab, coo_window, threads);
      if (coo_binary) {
        matrix.save_binary(coo_out);
      } else {
        matrix.save_tsv(coo_out);
      }
      log_info("stored cells " + std::to_string(matrix.stored_cells()));
    } else if (*gt) {
      if (auto v = gt_opts.violations(); !v.empty()) throw ValidationError(std::move(v));
      const TokenCleaner cleaner(gt_clean.build());
      const auto vocab = Vocabulary::load(gt_vocab);
      const auto concepts = load_concepts(gt_concepts, cleaner);
      const auto kept = filter_ground_truth(concepts, vocab, gt_opts);
      const auto seeds = assign_seeds(kept, derive_seed(gt_seed, "ground-truth"));
      save_seeds(seeds, gt_out);
      log_info(std::to_string(seeds.size()) + " of " + std::to_string(concepts.size()) +
               " concepts are evaluable");
    } else if (*tr) {
      const HyperParams hp = tr_args.build(tr_seed, threads);
      const auto vocab = Vocabulary::load(tr_vocab);
      const auto matrix = CooccurrenceMatrix::load(tr_matrix);
      if (matrix.vocab_size() != vocab.size()) {
        throw Error("matrix vocabulary size does not match " + tr_vocab);
      }
      const auto result = train(matrix, hp, log_epoch);
      save_word_vectors(to_word_vectors(result.model, vocab, hp.vectors), tr_out);
      if (!tr_log.empty()) save_training_log(result.epochs, tr_log);
    } else if (*qu) {
      if (qu_n < 1) throw ValidationError({"top_n >= 1"});
      const SimilarityIndex index(load_word_vectors(qu_emb));
      const auto hits = index.top_similar(std::string_view(qu_token), qu_n);
      for (std::size_t r = 0; r < hits.size(); ++r) {
        std::printf("%zu\t%s\t%.6f\n", r + 1, index.token(hits[r].id).c_str(), hits[r].cosine);
      }
    } else if (*en) {
      const HyperParams hp = en_args.build(en_seed, threads);
      en_fc.boost = BoostPolicy::parse(en_boost);
      en_fc.pairs = en_pairs == "all" ? BoostPairs::AllPairs : BoostPairs::SeedCandidate;
      if (auto v = en_fc.violations(); !v.empty()) throw ValidationError(std::move(v));
      const auto vocab = Vocabulary::load(en_vocab);
      const auto matrix = CooccurrenceMatrix::load(en_matrix);
      if (matrix.vocab_size() != vocab.size()) {
        throw Error("matrix vocabulary size does not match " + en_vocab);
      }
      if (en_window != 0 && en_window != matrix.window_size()) {
        throw ValidationError({"--window " + std::to_string(en_window) +
                               " does not match the matrix window " +
                               std::to_string(matrix.window_size())});
      }
      const auto seeds = load_seeds(en_seeds);
      const auto result = run_gloveif(matrix, vocab, seeds, hp, en_fc, log_epoch);
      export_candidates(result.candidates, en_cands);
      if (!en_emb.empty()) save_word_vectors(result.vectors, en_emb);
      if (!en_log.empty()) save_training_log(result.training.epochs, en_log);
      log_info("boosted " + std::to_string(result.boosted_pairs) + " pairs");
    } else if (*ev) {
      ev_cfg.denominator = parse_denominator_mode(ev_denom);
      if (auto v = ev_cfg.violations(); !v.empty()) throw ValidationError(std::move(v));
      if (ev_runs < 1) throw ValidationError({"runs >= 1"});
      const SimilarityIndex index(load_word_vectors(ev_emb));
      const auto seeds = load_seeds(ev_seeds);
      const auto report =
          evaluate_runs(index, seeds, ev_cfg, ev_runs, derive_seed(ev_seed, "eval"));
      save_report(report, ev_out);
      const auto& m = report.primary();
      std::printf("precision %.2f  recall %.2f  F %.2f  MRR %.2f  detected %zu/%zu\n",
                  m.precision, m.recall, m.f_score, m.mrr, report.concepts_detected,
                  report.concepts_scored);
    } else if (*cmp) {
      const auto c = compare_reports(load_report(cmp_base), load_report(cmp_var));
      auto j = to_json(c);
      j["relative_f_improvement_text"] = format_relative_improvement(c);
      std::cout << j.dump(2) << '\n';
      if (!cmp_out.empty()) {
        std::ofstream out(cmp_out);
        if (!out) throw Error("cannot write " + cmp_out);
        out << j.dump(2) << '\n';
      }
    } else if (*run) {
      ConfigOverrides overrides;
      for (const auto& s : run_sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError({"--set expects key=value: " + s});
        overrides.emplace_back(std::string(trim(std::string_view(s).substr(0, eq))),
                               std::string(trim(std::string_view(s).substr(eq + 1))));
      }
      if (!run_corpus.empty()) overrides.emplace_back("corpus", run_corpus);
      if (!run_concepts.empty()) overrides.emplace_back("concepts", run_concepts);
      if (!run_workdir.empty()) overrides.emplace_back("workdir", run_workdir);
      if (*run_seed_opt) overrides.emplace_back("rng_seed", std::to_string(run_seed));
      if (app.get_option("--threads")->count() > 0) {
        overrides.emplace_back("threads", std::to_string(threads));
      }
      const auto validation = run_config.empty() ? parse_config("", overrides)
                                                 : validate_config(run_config, overrides);
      if (!validation.ok()) throw ValidationError(validation.violations);
      const RunConfig& config = *validation.config;
      if (run_check) {
        std::cout << config.to_text();
        return 0;
      }
      const auto result = run_pipeline(config);
      std::cout << "manifest " << result.manifest.string() << '\n';
      if (result.comparison) {
        std::cout << "relative F improvement " << format_relative_improvement(*result.comparison)
                  << '\n';
      }
    } else if (*sy) {
      if (sy_kind == "planted") {
        const auto corpus = generate_planted_corpus(sy_opts);
        write_lines(sy_out, corpus.documents);
        if (!sy_concepts.empty()) {
          std::ofstream out(sy_concepts);
          if (!out) throw Error("cannot write " + sy_concepts);
          out << planted_concepts_tsv(corpus);
        }
        log_info("wrote " + std::to_string(corpus.token_count) + " tokens");
      } else {
        write_lines(sy_out, generate_zipf_corpus(sy_opts.target_tokens, sy_opts.vocab_size,
                                                 sy_opts.doc_length, sy_opts.seed));
      }
    }
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) std::cerr << "error: " << v << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
