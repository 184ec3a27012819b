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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "chvenrich/enrich.hpp"
#include "chvenrich/embeddings.hpp"
#include "test_util.hpp"

using namespace chvenrich;

namespace {

// Seed on axis 0; n neighbours at 60 degrees from it, each on its own axis;
// k satellites hugging each neighbour on further private axes. Every
// neighbourhood is disjoint, so expansion has no collisions.
WordVectors star_vectors(std::size_t n, std::size_t k) {
  const std::size_t dim = 1 + n + n * k;
  WordVectors v;
  v.dim = dim;
  auto add = [&](std::string name, std::vector<double> row) {
    v.tokens.push_back(std::move(name));
    v.values.insert(v.values.end(), row.begin(), row.end());
  };
  std::vector<double> seed(dim, 0.0);
  seed[0] = 1.0;
  add("seed", seed);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> row(dim, 0.0);
    row[0] = 0.5;
    row[1 + a] = std::sqrt(0.75);
    add("n" + std::to_string(a), row);
    for (std::size_t b = 0; b < k; ++b) {
      auto sat = row;
      sat[1 + n + a * k + b] = 0.05 * static_cast<double>(b + 1);
      add("s" + std::to_string(a) + "_" + std::to_string(b), sat);
    }
  }
  return v;
}

CooccurrenceMatrix dense_matrix(std::size_t vocab, Rng& rng) {
  std::vector<Cell> cells;
  for (TokenId i = 0; i < vocab; ++i) {
    for (TokenId j = i + 1; j < vocab; ++j) {
      if (rng.uniform() < 0.5) cells.push_back({i, j, 0.5 + rng.uniform() * 40.0});
    }
  }
  return CooccurrenceMatrix(vocab, 10, cells);
}

Vocabulary numbered_vocab(std::size_t n) {
  std::vector<VocabEntry> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({"w" + std::to_string(100 + i), 1000 - i});
  return Vocabulary(e, 1);
}

}  // namespace

TEST_CASE("expand_seed yields n + n*k terms without collisions") {
  const SimilarityIndex index(star_vectors(10, 5));
  const auto out = expand_seed(index, TokenId{0}, 10, 5);
  CHECK(out.size() == 60);
  CHECK(std::set<TokenId>(out.begin(), out.end()).size() == 60);
  // The top-n block comes first.
  for (std::size_t r = 0; r < 10; ++r) CHECK(index.token(out[r])[0] == 'n');
  CHECK(expand_seed(index, TokenId{0}, 10, 0).size() == 10);
}

TEST_CASE("expand_seed on a tiny vocabulary") {
  const WordVectors v{{"a", "b", "c"}, 2, {1, 0, 0.8, 0.6, 0, 1}};
  const SimilarityIndex index(v);
  const auto out = expand_seed(index, TokenId{0}, 2, 2);
  CHECK(out.size() <= 2);
  CHECK(std::find(out.begin(), out.end(), TokenId{0}) == out.end());
}

TEST_CASE("expand_seed never exceeds n + n*k and never contains the seed") {
  Rng rng(3);
  WordVectors v;
  v.dim = 4;
  for (int t = 0; t < 80; ++t) {
    v.tokens.push_back("t" + std::to_string(t));
    for (int d = 0; d < 4; ++d) v.values.push_back(rng.uniform(-1, 1));
  }
  const SimilarityIndex index(v);
  for (TokenId seed = 0; seed < 80; seed += 7) {
    for (std::size_t n : {1, 3, 10}) {
      for (std::size_t k : {0, 1, 5}) {
        const auto out = expand_seed(index, seed, n, k);
        CHECK(out.size() <= n + n * k);
        CHECK(std::set<TokenId>(out.begin(), out.end()).size() == out.size());
        CHECK(std::find(out.begin(), out.end(), seed) == out.end());
      }
    }
  }
}

TEST_CASE("expand_seed skips unknown seeds") {
  const SimilarityIndex index(star_vectors(2, 1));
  CHECK_FALSE(expand_seed(index, std::string_view("nothing"), 2, 1).has_value());
  CHECK(expand_seed(index, std::string_view("seed"), 2, 1)->size() == 4);
}

TEST_CASE("feedback config validation") {
  FeedbackConfig fc;
  CHECK(fc.violations().empty());
  fc.top_n = 0;
  fc.rounds = 0;
  fc.boost = BoostPolicy{BoostKind::Constant, 0.0};
  CHECK(fc.violations().size() == 3);
}

TEST_CASE("run_gloveif leaves its input alone and boosts seed pairs") {
  Rng rng(8);
  const auto vocab = numbered_vocab(30);
  const auto matrix = dense_matrix(30, rng);
  const auto copy = matrix;
  HyperParams hp;
  hp.dim = 8;
  hp.epochs = 5;
  FeedbackConfig fc;
  fc.top_n = 3;
  fc.top_k = 2;
  const std::vector<SeedAssignment> seeds{{"C1", "w100", {"w101"}}, {"C2", "missing", {"w102"}}};
  const auto result = run_gloveif(matrix, vocab, seeds, hp, fc);
  CHECK(matrix == copy);
  CHECK(result.skipped_seeds == std::vector<std::string>{"missing"});
  CHECK(result.boosted_pairs >= 3);
  CHECK(result.boosted_pairs <= 9);
  CHECK(result.candidates.by_seed.size() == 1);
  const auto& list = result.candidates.by_seed.at("w100");
  CHECK(list.size() == 3);
  for (const auto& c : list) {
    CHECK(c.token != "w100");
    CHECK((c.round == 1 || c.round == 2));
  }
  for (TokenId i = 0; i < 30; ++i) {
    for (TokenId j = 0; j < 30; ++j) CHECK(result.boosted.at(i, j) >= matrix.at(i, j));
  }
}

TEST_CASE("all-pairs boosting touches candidate pairs too") {
  Rng rng(9);
  const auto vocab = numbered_vocab(25);
  const auto matrix = dense_matrix(25, rng);
  HyperParams hp;
  hp.dim = 6;
  hp.epochs = 3;
  FeedbackConfig fc;
  fc.top_n = 3;
  fc.top_k = 1;
  const std::vector<SeedAssignment> seeds{{"C1", "w100", {"w101"}}};
  const auto seed_only = run_gloveif(matrix, vocab, seeds, hp, fc);
  fc.pairs = BoostPairs::AllPairs;
  const auto all = run_gloveif(matrix, vocab, seeds, hp, fc);
  CHECK(all.boosted_pairs > seed_only.boosted_pairs);
}

TEST_CASE("a negligible boost reproduces plain GloVe rankings") {
  Rng rng(10);
  const auto vocab = numbered_vocab(40);
  const auto matrix = dense_matrix(40, rng);
  HyperParams hp;
  hp.dim = 10;
  hp.epochs = 10;
  hp.rng_seed = 17;
  FeedbackConfig fc;
  fc.boost = BoostPolicy{BoostKind::RowMeanScaled, 1e-12};
  std::vector<SeedAssignment> seeds;
  for (int s = 0; s < 5; ++s) seeds.push_back({"C" + std::to_string(s), vocab.token_at(s * 3), {"x"}});
  const auto gif = run_gloveif(matrix, vocab, seeds, hp, fc);
  const SimilarityIndex plain(to_word_vectors(train(matrix, hp).model, vocab));
  const auto base = nearest_candidates(plain, seeds, fc.top_n);
  REQUIRE(gif.candidates.by_seed.size() == base.by_seed.size());
  for (const auto& [seed, list] : base.by_seed) {
    const auto& other = gif.candidates.by_seed.at(seed);
    REQUIRE(other.size() == list.size());
    for (std::size_t r = 0; r < list.size(); ++r) CHECK(other[r].token == list[r].token);
  }
}

TEST_CASE("run_gloveif rejects a zero boost") {
  const auto vocab = numbered_vocab(3);
  const CooccurrenceMatrix m(3, 10, {{0, 1, 1.0}});
  FeedbackConfig fc;
  fc.boost = BoostPolicy{BoostKind::Constant, 0.0};
  CHECK_THROWS_AS(run_gloveif(m, vocab, std::vector<SeedAssignment>{{"C1", "w100", {"w101"}}},
                              HyperParams{}, fc),
                  ValidationError);
}

TEST_CASE("export_candidates rows") {
  TempDir dir;
  CandidateSet set;
  set.by_seed["skin"] = {{"itch", 0.9, 1}, {"itchi", 0.8, 1}, {"dry", 0.7, 2}, {"irrit", 0.6, 1}};
  set.by_seed["ray"] = {{"xrai", 0.95, 1}, {"scan", 0.9, 1}, {"mri", 0.85, 1}, {"spine", 0.5, 1}};
  export_candidates(set, dir.path() / "c.tsv");
  std::ifstream in(dir.path() / "c.tsv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 9);
  CHECK(lines[0] == "#candidates v1");
  CHECK(lines[1] == "ray\t1\txrai\t0.950000");
  CHECK(lines[4] == "ray\t4\tspine\t0.500000");
  CHECK(lines[5] == "skin\t1\titch\t0.900000");
  CHECK(lines[8] == "skin\t4\tirrit\t0.600000");

  export_candidates(CandidateSet{}, dir.path() / "empty.tsv");
  std::ifstream e(dir.path() / "empty.tsv");
  std::string only, extra;
  std::getline(e, only);
  CHECK(only == "#candidates v1");
  CHECK_FALSE(std::getline(e, extra));
}
