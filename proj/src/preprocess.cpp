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

#include "chvenrich/preprocess.hpp"

#include <algorithm>
#include <thread>

#include "chvenrich/common.hpp"
#include "chvenrich/stemmer.hpp"

namespace chvenrich {

std::vector<std::string> CleaningConfig::violations() const {
  std::vector<std::string> out;
  if (min_token_length < 1) out.emplace_back("min_token_length >= 1");
  if (standard_stopwords.contains("") || medical_stopwords.contains("")) {
    out.emplace_back("stopword sets must not contain the empty string");
  }
  return out;
}

const std::vector<std::string>& default_standard_stopwords() {
  static const std::vector<std::string> kWords{
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom",
    "this", "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a",
    "an", "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at",
    "by", "for", "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on",
    "off", "over", "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few", "more", "most", "other",
    "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too", "very",
    "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now", "d",
    "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't",
    "isn", "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't",
    "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won",
    "won't", "wouldn", "wouldn't"
  };
  return kWords;
}

const std::vector<std::string>& default_medical_stopwords() {
  static const std::vector<std::string> kWords{"test", "procedure", "disease", "doctor",
                                               "patient"};
  return kWords;
}

CleaningConfig default_cleaning_config() {
  CleaningConfig config;
  config.standard_stopwords = {default_standard_stopwords().begin(),
                               default_standard_stopwords().end()};
  config.medical_stopwords = {default_medical_stopwords().begin(),
                              default_medical_stopwords().end()};
  return config;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.emplace(word);
  }
  return words;
}

std::string normalize_word(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c >= 'a' && c <= 'z') {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

TokenCleaner::TokenCleaner(CleaningConfig config) : config_(std::move(config)) {
  if (auto v = config_.violations(); !v.empty()) throw ValidationError(std::move(v));
  for (const auto* set : {&config_.standard_stopwords, &config_.medical_stopwords}) {
    for (const auto& w : *set) {
      std::string n = normalize_word(w);
      if (n.empty()) continue;
      if (config_.stemming_enabled) stemmed_stopwords_.insert(stem(n));
      stopwords_.insert(std::move(n));
    }
  }
}

bool TokenCleaner::is_stopword(const std::string& token) const {
  return stopwords_.contains(token) || stemmed_stopwords_.contains(token);
}

std::optional<std::string> TokenCleaner::clean(std::string_view raw) const {
  std::string token = normalize_word(raw);
  if (token.empty() || is_stopword(token)) return std::nullopt;
  if (config_.stemming_enabled) {
    token = stem(token);
    if (is_stopword(token)) return std::nullopt;
  }
  if (token.size() < config_.min_token_length) return std::nullopt;
  return token;
}

std::vector<std::string> TokenCleaner::clean_line(std::string_view line) const {
  std::vector<std::string> tokens;
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(kSpace, pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(kSpace, start);
    if (end == std::string_view::npos) end = line.size();
    if (auto t = clean(line.substr(start, end - start))) tokens.push_back(std::move(*t));
    pos = end;
  }
  return tokens;
}

std::optional<std::string> clean_token(std::string_view raw, const CleaningConfig& config) {
  return TokenCleaner(config).clean(raw);
}

namespace {

void check_utf8(const std::filesystem::path& path, std::string_view line, std::size_t offset) {
  if (const auto bad = find_invalid_utf8(line); bad != std::string_view::npos) {
    throw Error("invalid UTF-8 in " + path.string() + " at byte offset " +
                std::to_string(offset + bad));
  }
}

}  // namespace

CorpusReader::CorpusReader(const std::filesystem::path& path, const TokenCleaner& cleaner)
    : path_(path), in_(path, std::ios::binary), cleaner_(cleaner) {
  if (!in_) throw Error("cannot open corpus " + path.string());
}

std::optional<Document> CorpusReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    const std::size_t line_offset = offset_;
    offset_ += line.size() + 1;
    check_utf8(path_, line, line_offset);
    auto tokens = cleaner_.clean_line(line);
    if (tokens.empty()) continue;
    return Document{next_id_++, std::move(tokens)};
  }
  if (in_.bad()) throw Error("read failure on " + path_.string());
  return std::nullopt;
}

std::vector<Document> tokenize_corpus(const std::filesystem::path& path,
                                      const TokenCleaner& cleaner, unsigned threads) {
  std::vector<Document> docs;
  if (threads <= 1) {
    CorpusReader reader(path, cleaner);
    while (auto doc = reader.next()) docs.push_back(std::move(*doc));
    return docs;
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus " + path.string());
  std::vector<std::string> lines;
  std::size_t offset = 0;
  for (std::string line; std::getline(in, line);) {
    check_utf8(path, line, offset);
    offset += line.size() + 1;
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw Error("read failure on " + path.string());

  std::vector<std::vector<std::string>> cleaned(lines.size());
  const std::size_t shard = (lines.size() + threads - 1) / threads;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(lines.size(), t * shard);
      const std::size_t end = std::min(lines.size(), begin + shard);
      workers.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) cleaned[i] = cleaner.clean_line(lines[i]);
      });
    }
  }
  for (auto& tokens : cleaned) {
    if (tokens.empty()) continue;
    docs.push_back(Document{docs.size(), std::move(tokens)});
  }
  return docs;
}

void write_documents(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "#corpus v1 documents=" << docs.size() << '\n';
  for (const auto& doc : docs) {
    for (std::size_t k = 0; k < doc.tokens.size(); ++k) {
      if (k) out << ' ';
      out << doc.tokens[k];
    }
    out << '\n';
  }
  if (!out) throw Error("write failure on " + path.string());
}

std::vector<Document> read_documents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open cleaned corpus " + path.string());
  std::vector<Document> docs;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.front() == '#') continue;
    Document doc{docs.size(), {}};
    for (auto piece : split(line, ' ')) {
      piece = trim(piece);
      if (!piece.empty()) doc.tokens.emplace_back(piece);
    }
    if (!doc.tokens.empty()) docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace chvenrich
