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
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/preprocess.hpp"
#include "test_util.hpp"

using namespace chvenrich;

TEST_CASE("clean_token examples") {
  const auto cfg = default_cleaning_config();
  CHECK(clean_token("Stenosis,", cfg) == std::optional<std::string>("stenos"));
  CHECK_FALSE(clean_token("at", cfg).has_value());
  CHECK_FALSE(clean_token("disease", cfg).has_value());
  CHECK(clean_token("XYZ", cfg) == std::optional<std::string>("xyz"));
}

TEST_CASE("clean_token strips digits, punctuation and non-ASCII bytes") {
  const auto cfg = default_cleaning_config();
  CHECK(clean_token("(itching!!)", cfg) == std::optional<std::string>("itch"));
  CHECK(clean_token("h2o2", cfg) == std::nullopt);
  CHECK(clean_token("covid19", cfg) == std::optional<std::string>("covid"));
  CHECK(clean_token("caf\xc3\xa9s", cfg) == std::optional<std::string>("caf"));
  CHECK_FALSE(clean_token("12345", cfg).has_value());
  CHECK_FALSE(clean_token("", cfg).has_value());
  CHECK_FALSE(clean_token("...", cfg).has_value());
}

TEST_CASE("stopwords are matched before and after stemming") {
  const auto cfg = default_cleaning_config();
  CHECK_FALSE(clean_token("The", cfg).has_value());
  CHECK_FALSE(clean_token("diseases", cfg).has_value());
  CHECK_FALSE(clean_token("Doctors", cfg).has_value());
  CHECK_FALSE(clean_token("tests", cfg).has_value());
  CHECK_FALSE(clean_token("procedures", cfg).has_value());
  CHECK(clean_token("headache", cfg).has_value());
}

TEST_CASE("stemming toggle and minimum length") {
  auto cfg = default_cleaning_config();
  cfg.stemming_enabled = false;
  CHECK(clean_token("Stenosis,", cfg) == std::optional<std::string>("stenosis"));
  cfg.min_token_length = 9;
  CHECK_FALSE(clean_token("stenosis", cfg).has_value());
  cfg.min_token_length = 1;
  CHECK(clean_token("x", cfg) == std::optional<std::string>("x"));
}

TEST_CASE("length is checked after stemming") {
  auto cfg = default_cleaning_config();
  cfg.min_token_length = 4;
  // "ties" -> "ti"
  CHECK_FALSE(clean_token("ties", cfg).has_value());
  cfg.stemming_enabled = false;
  CHECK(clean_token("ties", cfg) == std::optional<std::string>("ties"));
}

TEST_CASE("CleaningConfig invariants") {
  auto cfg = default_cleaning_config();
  CHECK(cfg.violations().empty());
  cfg.min_token_length = 0;
  CHECK_FALSE(cfg.violations().empty());
  cfg = default_cleaning_config();
  cfg.medical_stopwords.insert("");
  CHECK_FALSE(cfg.violations().empty());
}

TEST_CASE("cleaning is idempotent on its own output") {
  const auto cfg = default_cleaning_config();
  for (const char* raw : {"Stenosis,", "obstruction", "ITCHING", "generalizations", "hopefulness",
                          "allergies", "vomiting", "Retinopathy.", "xyz", "operator"}) {
    CAPTURE(raw);
    const auto once = clean_token(raw, cfg);
    REQUIRE(once.has_value());
    CHECK(clean_token(*once, cfg) == once);
  }
}

TEST_CASE("clean_line preserves the order of surviving words") {
  const TokenCleaner cleaner(default_cleaning_config());
  CHECK(cleaner.clean_line("Chest   pain\tand the NAUSEA, at night") ==
        std::vector<std::string>{"chest", "pain", "nausea", "night"});
}

TEST_CASE("a larger stopword set never adds tokens") {
  Rng rng(7);
  const std::vector<std::string> words{"chest", "pain", "night", "fever", "cough",
                                       "swelling", "itching", "nausea", "rash"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string line;
    for (int k = 0; k < 20; ++k) line += words[rng.uniform_index(words.size())] + " ";
    auto small = default_cleaning_config();
    auto large = small;
    large.medical_stopwords.insert(words[rng.uniform_index(words.size())]);
    const auto a = TokenCleaner(small).clean_line(line);
    const auto b = TokenCleaner(large).clean_line(line);
    CHECK(b.size() <= a.size());
    // b is a subsequence of a.
    std::size_t pos = 0;
    for (const auto& t : b) {
      while (pos < a.size() && a[pos] != t) ++pos;
      CHECK(pos < a.size());
      ++pos;
    }
  }
}

TEST_CASE("tokenize_corpus example") {
  TempDir dir;
  const auto path = dir.write("corpus.txt", "chest pain xx\n\nthe of\n");
  const TokenCleaner cleaner(default_cleaning_config());
  const auto docs = tokenize_corpus(path, cleaner);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].id == 0);
  CHECK(docs[0].tokens == std::vector<std::string>{"chest", "pain"});
}

TEST_CASE("tokenize_corpus on an empty file") {
  TempDir dir;
  const auto path = dir.write("empty.txt", "");
  CHECK(tokenize_corpus(path, TokenCleaner(default_cleaning_config())).empty());
}

TEST_CASE("tokenize_corpus numbers documents consecutively") {
  TempDir dir;
  std::string text;
  for (int i = 0; i < 37; ++i) text += "fever cough night\n";
  const auto path = dir.write("c.txt", text);
  const auto docs = tokenize_corpus(path, TokenCleaner(default_cleaning_config()));
  REQUIRE(docs.size() == 37);
  for (std::size_t i = 0; i < docs.size(); ++i) CHECK(docs[i].id == i);
}

TEST_CASE("tokenize_corpus gives the same result with several threads") {
  TempDir dir;
  Rng rng(3);
  const std::vector<std::string> words{"chest", "pain", "the", "at", "fever", "", "Cough,", "x1"};
  std::string text;
  for (int i = 0; i < 500; ++i) {
    const auto n = rng.uniform_index(6);
    for (std::uint64_t k = 0; k < n; ++k) text += words[rng.uniform_index(words.size())] + " ";
    text += '\n';
  }
  const auto path = dir.write("c.txt", text);
  const TokenCleaner cleaner(default_cleaning_config());
  const auto one = tokenize_corpus(path, cleaner, 1);
  CHECK(tokenize_corpus(path, cleaner, 3) == one);
  CHECK(tokenize_corpus(path, cleaner, 8) == one);
}

TEST_CASE("invalid UTF-8 is reported with its byte offset") {
  TempDir dir;
  const auto path = dir.write("bad.txt", std::string("fever\nchest \xff pain\n"));
  const TokenCleaner cleaner(default_cleaning_config());
  try {
    tokenize_corpus(path, cleaner);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("12") != std::string::npos);
  }
  CHECK(find_invalid_utf8("ok \xc3\xa9") == std::string_view::npos);
  CHECK(find_invalid_utf8("ab\xc3") == 2);
  CHECK(find_invalid_utf8("\xed\xa0\x80") == 0);
}

TEST_CASE("missing corpus file names the path") {
  const TokenCleaner cleaner(default_cleaning_config());
  try {
    tokenize_corpus("/nonexistent/corpus.txt", cleaner);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/corpus.txt") != std::string::npos);
  }
}

TEST_CASE("shipped stopword files match the built-in lists") {
  const std::filesystem::path data = CHVENRICH_DATA_DIR;
  const auto en = load_stopwords(data / "stopwords_en.txt");
  const auto med = load_stopwords(data / "stopwords_medical.txt");
  const auto& builtin_en = default_standard_stopwords();
  const auto& builtin_med = default_medical_stopwords();
  CHECK(en == std::unordered_set<std::string>(builtin_en.begin(), builtin_en.end()));
  CHECK(med == std::unordered_set<std::string>(builtin_med.begin(), builtin_med.end()));
  CHECK(med == std::unordered_set<std::string>{"test", "procedure", "disease", "doctor", "patient"});
}

TEST_CASE("load_stopwords skips comments and blank lines") {
  TempDir dir;
  const auto path = dir.write("s.txt", "# header\n\nfoo\n  bar  \n#baz\n");
  CHECK(load_stopwords(path) == std::unordered_set<std::string>{"foo", "bar"});
}

TEST_CASE("cleaned corpus round-trips through its file format") {
  TempDir dir;
  const std::vector<Document> docs{{0, {"chest", "pain"}}, {1, {"fever"}}};
  write_documents(dir.path() / "docs.txt", docs);
  CHECK(read_documents(dir.path() / "docs.txt") == docs);
  std::ifstream in(dir.path() / "docs.txt");
  std::string header;
  std::getline(in, header);
  CHECK(header == "#corpus v1 documents=2");
}
