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

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace chvenrich {

// n distinct pseudo-words (3-4 CV syllables) that survive the default
// cleaning unchanged: not stopwords, and already at their stem.
std::vector<std::string> pseudo_words(std::size_t n, std::uint64_t seed);

struct PlantedCorpusOptions {
  std::size_t pairs = 20;
  std::size_t vocab_size = 500;
  std::size_t contexts_per_pair = 12;
  std::size_t target_tokens = 200000;
  std::size_t doc_length = 50;
  // Probability that the next segment is a planted mention block rather than
  // one background word.
  double mention_rate = 0.35;
  // Context words on each side of a planted term.
  std::size_t block_context = 3;
  std::uint64_t seed = 1;
};

// Synonym pairs (s, t) written into the same per-pair context distribution,
// mixed with Zipf background words.
struct PlantedCorpus {
  std::vector<std::string> documents;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t token_count = 0;
};

PlantedCorpus generate_planted_corpus(const PlantedCorpusOptions& options);

// Concepts file with one concept per planted pair: C%07d, a placeholder
// professional name, and "s|t".
std::string planted_concepts_tsv(const PlantedCorpus& corpus);

// Documents drawn from a Zipf(1) unigram distribution over vocab_size words.
std::vector<std::string> generate_zipf_corpus(std::size_t tokens, std::size_t vocab_size,
                                              std::size_t doc_length, std::uint64_t seed);

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

}  // namespace chvenrich
