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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chvenrich/chv.hpp"
#include "test_util.hpp"

using namespace chvenrich;

namespace {

std::vector<Concept> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_concepts(in, TokenCleaner(default_cleaning_config()));
}

Vocabulary vocab_of(const std::vector<VocabEntry>& entries) {
  auto sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const VocabEntry& a, const VocabEntry& b) {
    return a.count != b.count ? a.count > b.count : a.token < b.token;
  });
  return Vocabulary(sorted, 1);
}

}  // namespace

TEST_CASE("load_concepts examples") {
  const auto c = parse(
      "# comment\n"
      "C0035334\tretinitis pigmentosa\tpigmentary|retinopathy|cone|rod\n"
      "\n"
      "C0034194\tpyloric stenosis\tstenos|gastric|outlet|obstruct\n");
  REQUIRE(c.size() == 2);
  CHECK(c[0].cui == "C0035334");
  CHECK(c[0].professional_name == "retinitis pigmentosa");
  CHECK(c[0].chv_terms.size() == 4);
  CHECK(c[0].chv_terms == std::vector<std::string>{"pigmentari", "retinopathi", "cone", "rod"});
  CHECK(c[1].chv_terms.size() == 4);
  CHECK(c[1].chv_terms == std::vector<std::string>{"stenos", "gastric", "outlet", "obstruct"});
}

TEST_CASE("multi-word terms are split into unigrams") {
  const auto c = parse("C1\tpyloric stenosis\tgastric outlet|outlet obstruction|stenosis\n");
  REQUIRE(c.size() == 1);
  CHECK(c[0].chv_terms == std::vector<std::string>{"gastric", "outlet", "obstruct", "stenos"});
}

TEST_CASE("malformed concept lines name the line") {
  try {
    parse("C1\tname\tterm\nC2 name term\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("X1\tname\tterm\n"), Error);
  CHECK_THROWS_AS(parse("C12a\tname\tterm\n"), Error);
  CHECK_THROWS_AS(parse("C1\tname\tterm\textra\n"), Error);
  CHECK_THROWS_WITH_AS(parse("C1\ta\tb\nC1\tc\td\n"), doctest::Contains("duplicate"), Error);
}

TEST_CASE("is_morphological_variant examples") {
  CHECK(is_morphological_variant("Retinitis", "retinitis pigmentosa"));
  CHECK(is_morphological_variant("pigmentosas", "retinitis pigmentosa"));
  CHECK_FALSE(is_morphological_variant("pigmentary", "retinitis pigmentosa"));
  CHECK(is_morphological_variant("Stenosis,", "pyloric stenosis"));
  CHECK(is_morphological_variant("pyloric2", "pyloric stenosis"));
  CHECK_FALSE(is_morphological_variant("", "pyloric stenosis"));
}

TEST_CASE("filter_ground_truth keeps frequent non-variant terms") {
  Concept c{"C1", "professional name", {"aaa", "bbb", "ccc"}, {"aaa", "bbb", "ccc"}};
  const auto vocab = vocab_of({{"aaa", 150}, {"bbb", 120}, {"ccc", 3}});
  const auto kept = filter_ground_truth(std::vector<Concept>{c}, vocab);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].chv_terms == std::vector<std::string>{"aaa", "bbb"});
}

TEST_CASE("filter_ground_truth drops under-supported concepts") {
  Concept one{"C1", "name", {"aaa", "ccc"}, {"aaa", "ccc"}};
  Concept two{"C2", "name", {"aaa", "bbb"}, {"aaa", "bbb"}};
  const auto vocab = vocab_of({{"aaa", 150}, {"bbb", 120}, {"ccc", 3}});
  const auto kept = filter_ground_truth(std::vector<Concept>{one, two}, vocab);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].cui == "C2");
  CHECK_THROWS_WITH_AS(filter_ground_truth(std::vector<Concept>{one}, vocab),
                       "no evaluable concepts", Error);
}

TEST_CASE("filter_ground_truth removes variants of the professional name") {
  const auto concepts = parse("C1\tpyloric stenosis\tStenosis|gastric|outlet|obstruction\n");
  const auto vocab = vocab_of({{"stenos", 500}, {"gastric", 500}, {"outlet", 500}, {"obstruct", 500}});
  const auto kept = filter_ground_truth(concepts, vocab);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].chv_terms == std::vector<std::string>{"gastric", "outlet", "obstruct"});
}

TEST_CASE("filter_ground_truth properties") {
  Rng rng(31);
  std::vector<VocabEntry> entries;
  for (int t = 0; t < 30; ++t) entries.push_back({"term" + std::string(1, char('a' + t % 26)) + std::to_string(t), 1 + rng.uniform_index(300)});
  const auto vocab = vocab_of(entries);
  std::vector<Concept> concepts;
  for (int c = 0; c < 40; ++c) {
    Concept con{"C" + std::to_string(c), entries[rng.uniform_index(30)].token + " thing", {}, {}};
    for (std::uint64_t k = 0, n = 1 + rng.uniform_index(5); k < n; ++k) {
      const auto& t = entries[rng.uniform_index(30)].token;
      if (std::find(con.chv_terms.begin(), con.chv_terms.end(), t) == con.chv_terms.end()) {
        con.chv_terms.push_back(t);
        con.source_terms.push_back(t);
      }
    }
    concepts.push_back(con);
  }
  const auto kept = filter_ground_truth(concepts, vocab);
  CHECK(filter_ground_truth(kept, vocab) == kept);
  for (const auto& c : kept) {
    CHECK(c.chv_terms.size() >= 2);
    for (const auto& t : c.chv_terms) {
      REQUIRE(vocab.lookup(t).has_value());
      CHECK(vocab.count_at(*vocab.lookup(t)) >= 100);
      CHECK_FALSE(is_morphological_variant(t, c.professional_name));
    }
  }
}

TEST_CASE("assign_seeds on a two-term concept") {
  const std::vector<Concept> c{{"C1", "name", {"xxx", "yyy"}, {"xxx", "yyy"}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = assign_seeds(c, seed);
    REQUIRE(a.size() == 1);
    CHECK((a[0].seed == "xxx" || a[0].seed == "yyy"));
    CHECK(a[0].targets == std::vector<std::string>{a[0].seed == "xxx" ? "yyy" : "xxx"});
    CHECK(assign_seeds(c, seed) == a);
  }
}

TEST_CASE("seed choice is uniform within three sigma") {
  const std::vector<Concept> c{{"C1", "name", {"aaa", "bbb", "ccc", "ddd"}, {"aaa", "bbb", "ccc", "ddd"}}};
  std::map<std::string, int> counts;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    const auto a = assign_seeds(c, static_cast<std::uint64_t>(seed));
    ++counts[a[0].seed];
    CHECK(a[0].targets.size() == 3);
  }
  const double p = 0.25;
  const double mean = trials * p;
  const double sigma = std::sqrt(trials * p * (1 - p));
  REQUIRE(counts.size() == 4);
  for (const auto& [term, n] : counts) {
    CAPTURE(term);
    CHECK(std::abs(n - mean) <= 3 * sigma);
  }
}

TEST_CASE("seed files round-trip") {
  TempDir dir;
  const std::vector<SeedAssignment> seeds{{"C1", "itch", {"rash", "hive"}}, {"C22", "fever", {"temp"}}};
  save_seeds(seeds, dir.path() / "s.tsv");
  CHECK(load_seeds(dir.path() / "s.tsv") == seeds);
  std::ifstream in(dir.path() / "s.tsv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "#seeds v1 concepts=2");
  std::getline(in, line);
  CHECK(line == "C1\titch\trash|hive");
}
