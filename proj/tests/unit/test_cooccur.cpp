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

#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chvenrich/cooccur.hpp"
#include "test_util.hpp"

using namespace chvenrich;

namespace {

std::vector<Document> docs_of(const std::vector<std::vector<std::string>>& lines) {
  std::vector<Document> docs;
  for (const auto& l : lines) docs.push_back({docs.size(), l});
  return docs;
}

// Plain double loop over every pair of positions within the window.
std::map<std::pair<TokenId, TokenId>, double> brute_force(const std::vector<Document>& docs,
                                                          const Vocabulary& vocab,
                                                          std::size_t window) {
  std::map<std::pair<TokenId, TokenId>, double> x;
  for (const auto& doc : docs) {
    std::vector<TokenId> ids;
    for (const auto& t : doc.tokens) {
      if (auto id = vocab.lookup(t)) ids.push_back(*id);
    }
    for (std::size_t p = 0; p < ids.size(); ++p) {
      for (std::size_t q = 0; q < ids.size(); ++q) {
        const std::size_t d = p > q ? p - q : q - p;
        if (d == 0 || d > window || ids[p] == ids[q]) continue;
        x[{ids[p], ids[q]}] += 1.0 / static_cast<double>(d);
      }
    }
  }
  return x;
}

}  // namespace

TEST_CASE("build_matrix on a three-token document") {
  const auto docs = docs_of({{"a", "b", "c"}});
  const Vocabulary vocab({{"a", 1}, {"b", 1}, {"c", 1}}, 1);
  const auto m = build_matrix(docs, vocab, 2);
  CHECK(m.at(0, 1) == 1.0);
  CHECK(m.at(1, 0) == 1.0);
  CHECK(m.at(1, 2) == 1.0);
  CHECK(m.at(2, 1) == 1.0);
  CHECK(m.at(0, 2) == 0.5);
  CHECK(m.at(2, 0) == 0.5);
  CHECK(m.stored_cells() == 3);
}

TEST_CASE("diagonal cells are never stored") {
  const Vocabulary vocab({{"a", 2}}, 1);
  const auto m = build_matrix(docs_of({{"a", "a"}}), vocab, 10);
  CHECK(m.empty());
  CHECK(m.at(0, 0) == 0.0);
}

TEST_CASE("a repeated document doubles every cell") {
  const Vocabulary vocab({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}}, 1);
  const std::vector<std::string> doc{"a", "c", "b", "d", "a", "b"};
  const auto once = build_matrix(docs_of({doc}), vocab, 3);
  const auto twice = build_matrix(docs_of({doc, doc}), vocab, 3);
  REQUIRE(once.stored_cells() == twice.stored_cells());
  for (std::size_t k = 0; k < once.stored_cells(); ++k) {
    CHECK(twice.cells()[k].weight == 2.0 * once.cells()[k].weight);
  }
}

TEST_CASE("out-of-vocabulary tokens do not occupy window positions") {
  const Vocabulary vocab({{"a", 1}, {"b", 1}}, 1);
  const auto m = build_matrix(docs_of({{"a", "zzz", "zzz", "b"}}), vocab, 1);
  CHECK(m.at(0, 1) == 1.0);
}

TEST_CASE("windows do not cross documents") {
  const Vocabulary vocab({{"a", 1}, {"b", 1}}, 1);
  const auto m = build_matrix(docs_of({{"a"}, {"b"}}), vocab, 10);
  CHECK(m.empty());
}

TEST_CASE("build_matrix matches the brute-force oracle on random corpora") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t vsize = 2 + rng.uniform_index(19);
    std::vector<VocabEntry> entries;
    for (std::size_t v = 0; v < vsize; ++v) entries.push_back({"w" + std::to_string(v), 1});
    const Vocabulary vocab(entries, 1);
    std::vector<std::vector<std::string>> lines(1 + rng.uniform_index(10));
    for (auto& l : lines) {
      const auto n = rng.uniform_index(60);
      for (std::uint64_t k = 0; k < n; ++k) {
        // Some tokens fall outside the vocabulary.
        l.push_back("w" + std::to_string(rng.uniform_index(vsize + 3)));
      }
    }
    const auto docs = docs_of(lines);
    const std::size_t window = std::vector<std::size_t>{1, 2, 5, 10}[rng.uniform_index(4)];
    const auto m = build_matrix(docs, vocab, window);
    const auto oracle = brute_force(docs, vocab, window);
    std::size_t nonzero = 0;
    for (const auto& [key, w] : oracle) {
      if (key.first < key.second) ++nonzero;
      CHECK(std::abs(m.at(key.first, key.second) - w) <= 1e-12);
    }
    CHECK(m.stored_cells() == nonzero);
  }
}

TEST_CASE("sharded counting is exactly the single-pass result") {
  Rng rng(5);
  std::vector<VocabEntry> entries;
  for (int v = 0; v < 30; ++v) entries.push_back({"w" + std::to_string(v), 1});
  const Vocabulary vocab(entries, 1);
  std::vector<std::vector<std::string>> lines(200);
  for (auto& l : lines) {
    for (std::uint64_t k = 0, n = rng.uniform_index(40); k < n; ++k) {
      l.push_back("w" + std::to_string(rng.uniform_index(30)));
    }
  }
  const auto docs = docs_of(lines);
  const auto single = build_matrix(docs, vocab, 7, 1);
  CHECK(build_matrix(docs, vocab, 7, 4) == single);
  CHECK(build_matrix(docs, vocab, 7, 3) == single);

  // Manual shards merged in reverse order.
  CooccurrenceCounter a(vocab.size(), 7), b(vocab.size(), 7);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    (d % 2 ? a : b).add(to_ids(docs[d], vocab));
  }
  b.merge(a);
  CHECK(b.finish() == single);
}

TEST_CASE("window bounds") {
  const Vocabulary vocab({{"a", 1}, {"b", 1}}, 1);
  CHECK_THROWS_AS(build_matrix(docs_of({{"a", "b"}}), vocab, 0), ValidationError);
  CHECK_THROWS_AS(build_matrix(docs_of({{"a", "b"}}), vocab, kMaxWindowSize + 1), ValidationError);
  CHECK_NOTHROW(build_matrix(docs_of({{"a", "b"}}), vocab, kMaxWindowSize));
}

TEST_CASE("apply_boost with a constant increment") {
  const CooccurrenceMatrix m(3, 10, {{0, 1, 2.5}, {1, 2, 1.0}});
  const auto b = apply_boost(m, {{{0, 1}}, BoostPolicy{BoostKind::Constant, 1.0}, 1});
  CHECK(b.at(0, 1) == 3.5);
  CHECK(b.at(1, 0) == 3.5);
  CHECK(b.at(1, 2) == 1.0);
  CHECK(m.at(0, 1) == 2.5);
}

TEST_CASE("apply_boost scaled by the row mean creates new cells") {
  // Row 0 has nonzero weights {1.0, 3.0}.
  const CooccurrenceMatrix m(4, 10, {{0, 1, 1.0}, {0, 2, 3.0}});
  const auto b = apply_boost(m, {{{0, 3}}, BoostPolicy{BoostKind::RowMeanScaled, 1.0}, 1});
  CHECK(b.at(0, 3) == 2.0);
  CHECK(b.at(3, 0) == 2.0);
  CHECK(b.stored_cells() == 3);
}

TEST_CASE("row means are taken before the plan lands") {
  const CooccurrenceMatrix m(4, 10, {{0, 1, 1.0}, {0, 2, 3.0}});
  const auto b = apply_boost(
      m, {{{0, 3}, {0, 1}}, BoostPolicy{BoostKind::RowMeanScaled, 0.5}, 1});
  CHECK(b.at(0, 3) == 1.0);
  CHECK(b.at(0, 1) == 2.0);
}

TEST_CASE("an empty plan leaves the matrix bit-identical") {
  const CooccurrenceMatrix m(3, 10, {{0, 1, 0.1}, {1, 2, 1.0 / 3.0}});
  CHECK(apply_boost(m, {}) == m);
}

TEST_CASE("apply_boost never decreases a cell") {
  Rng rng(9);
  std::vector<Cell> cells;
  for (TokenId i = 0; i < 15; ++i) {
    for (TokenId j = i + 1; j < 15; ++j) {
      if (rng.uniform() < 0.3) cells.push_back({i, j, 0.1 + rng.uniform() * 5});
    }
  }
  const CooccurrenceMatrix m(15, 5, cells);
  BoostPlan plan{{}, BoostPolicy{BoostKind::RowMeanScaled, 0.7}, 1};
  for (int k = 0; k < 20; ++k) {
    const auto s = static_cast<TokenId>(rng.uniform_index(15));
    const auto t = static_cast<TokenId>(rng.uniform_index(15));
    if (s != t) plan.pairs.emplace_back(s, t);
  }
  const auto b = apply_boost(m, plan);
  for (TokenId i = 0; i < 15; ++i) {
    for (TokenId j = 0; j < 15; ++j) {
      CHECK(b.at(i, j) >= m.at(i, j));
      CHECK(b.at(i, j) == b.at(j, i));
    }
  }
}

TEST_CASE("apply_boost rejects bad pairs") {
  const CooccurrenceMatrix m(3, 10, {{0, 1, 1.0}});
  CHECK_THROWS_AS(apply_boost(m, {{{1, 1}}, BoostPolicy{}, 1}), Error);
  CHECK_THROWS_AS(apply_boost(m, {{{0, 3}}, BoostPolicy{}, 1}), Error);
}

TEST_CASE("boost policy parsing") {
  CHECK(BoostPolicy::parse("row-mean:1.0") == BoostPolicy{BoostKind::RowMeanScaled, 1.0});
  CHECK(BoostPolicy::parse("constant:2.5") == BoostPolicy{BoostKind::Constant, 2.5});
  CHECK(BoostPolicy::parse("row-mean:1e-12").value == 1e-12);
  CHECK_THROWS_AS(BoostPolicy::parse("bogus:1"), ValidationError);
  CHECK_THROWS_AS(BoostPolicy::parse("row-mean"), ValidationError);
  CHECK_FALSE(BoostPolicy{BoostKind::Constant, 0.0}.violations().empty());
  CHECK_FALSE(BoostPolicy{BoostKind::Constant, -1.0}.violations().empty());
  CHECK(BoostPolicy::parse(BoostPolicy{BoostKind::Constant, 0.3}.to_string()) ==
        BoostPolicy{BoostKind::Constant, 0.3});
}

TEST_CASE("matrix files round-trip in both formats") {
  TempDir dir;
  const CooccurrenceMatrix m(5, 10, {{0, 1, 0.1}, {0, 4, 1.0 / 3.0}, {2, 3, 12345.678901234567}});
  m.save_tsv(dir.path() / "m.tsv");
  m.save_binary(dir.path() / "m.bin");
  CHECK(CooccurrenceMatrix::load(dir.path() / "m.tsv") == m);
  CHECK(CooccurrenceMatrix::load(dir.path() / "m.bin") == m);
  std::ifstream in(dir.path() / "m.tsv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "#cooccur v1 vocab=5 window=10");
  std::getline(in, line);
  CHECK(line == "0\t1\t0.10000000000000001");
}

TEST_CASE("matrix constructor enforces its invariants") {
  CHECK_THROWS_AS(CooccurrenceMatrix(3, 10, {{1, 1, 1.0}}), Error);
  CHECK_THROWS_AS(CooccurrenceMatrix(3, 10, {{1, 0, 1.0}}), Error);
  CHECK_THROWS_AS(CooccurrenceMatrix(3, 10, {{0, 1, 0.0}}), Error);
  CHECK_THROWS_AS(CooccurrenceMatrix(3, 10, {{0, 3, 1.0}}), Error);
  CHECK_THROWS_AS(CooccurrenceMatrix(3, 10, {{0, 2, 1.0}, {0, 1, 1.0}}), Error);
}

TEST_CASE("row means") {
  const CooccurrenceMatrix m(4, 10, {{0, 1, 1.0}, {0, 2, 3.0}, {1, 2, 5.0}});
  const auto means = m.row_means();
  CHECK(means[0] == 2.0);
  CHECK(means[1] == 3.0);
  CHECK(means[2] == 4.0);
  CHECK(means[3] == 0.0);
}
