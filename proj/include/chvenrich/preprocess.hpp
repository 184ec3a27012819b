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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace chvenrich {

struct Document {
  std::size_t id = 0;
  std::vector<std::string> tokens;

  bool operator==(const Document&) const = default;
};

struct CleaningConfig {
  std::size_t min_token_length = 3;
  std::unordered_set<std::string> standard_stopwords;
  std::unordered_set<std::string> medical_stopwords;
  bool stemming_enabled = true;

  std::vector<std::string> violations() const;
};

// Built-in lists; identical to data/stopwords_en.txt and
// data/stopwords_medical.txt.
const std::vector<std::string>& default_standard_stopwords();
const std::vector<std::string>& default_medical_stopwords();

// Defaults: min length 3, stemming on, both built-in stopword lists.
CleaningConfig default_cleaning_config();

// One token per line; blank lines and lines starting with '#' are ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

// Lowercases ASCII letters and drops every other byte (digits, punctuation,
// non-ASCII). Used for both corpus tokens and stopword entries.
std::string normalize_word(std::string_view raw);

// Compiled form of a CleaningConfig. Stopwords are matched against the
// normalized token and against its stem, so "diseases" is caught by a
// "disease" entry once both are stemmed.
class TokenCleaner {
 public:
  explicit TokenCleaner(CleaningConfig config);

  std::optional<std::string> clean(std::string_view raw) const;
  // Whitespace-splits a line and cleans each word, keeping survivors in order.
  std::vector<std::string> clean_line(std::string_view line) const;

  const CleaningConfig& config() const { return config_; }

 private:
  bool is_stopword(const std::string& token) const;

  CleaningConfig config_;
  std::unordered_set<std::string> stopwords_;
  std::unordered_set<std::string> stemmed_stopwords_;
};

std::optional<std::string> clean_token(std::string_view raw, const CleaningConfig& config);

// Streams Documents from a UTF-8 file, one document per line. Lines that are
// empty after cleaning produce no Document; ids count emitted documents.
class CorpusReader {
 public:
  CorpusReader(const std::filesystem::path& path, const TokenCleaner& cleaner);

  std::optional<Document> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  const TokenCleaner& cleaner_;
  std::size_t next_id_ = 0;
  std::size_t offset_ = 0;
};

// Reads and cleans a whole corpus. With threads > 1 lines are cleaned in
// contiguous shards; the result is identical to the single-threaded one.
std::vector<Document> tokenize_corpus(const std::filesystem::path& path,
                                      const TokenCleaner& cleaner, unsigned threads = 1);

// Cleaned corpus file: "#corpus v1 documents=N" header, then one document per
// line with tokens separated by single spaces.
void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs);
std::vector<Document> read_documents(const std::filesystem::path& path);

}  // namespace chvenrich
