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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chvenrich/chv.hpp"
#include "chvenrich/cooccur.hpp"
#include "chvenrich/simindex.hpp"
#include "chvenrich/trainer.hpp"
#include "chvenrich/vocab.hpp"

namespace chvenrich {

// Which pairs of the expanded neighbourhood get boosted.
enum class BoostPairs { SeedCandidate, AllPairs };

struct FeedbackConfig {
  std::size_t top_n = 10;
  std::size_t top_k = 5;
  int rounds = 1;
  BoostPolicy boost;
  BoostPairs pairs = BoostPairs::SeedCandidate;

  std::vector<std::string> violations() const;
};

// Top-n neighbours of the seed followed by the top-k neighbours of each of
// them, in order, without the seed and without repeats. At most n + n*k ids.
std::vector<TokenId> expand_seed(const SimilarityIndex& index, TokenId seed, std::size_t n,
                                 std::size_t k);
// Logs a warning and returns nullopt when the seed is not indexed.
std::optional<std::vector<std::string>> expand_seed(const SimilarityIndex& index,
                                                    std::string_view seed, std::size_t n,
                                                    std::size_t k);

struct Candidate {
  std::string token;
  double cosine = 0.0;
  // Feedback round whose expansion first reached this token (1-based), or
  // rounds + 1 if it only appeared after the final retrain.
  int round = 0;

  bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
  // Keyed (and therefore sorted) by seed token; each list in rank order.
  std::map<std::string, std::vector<Candidate>> by_seed;

  bool operator==(const CandidateSet&) const = default;
};

// Plain top-n neighbour lists for every indexed seed.
CandidateSet nearest_candidates(const SimilarityIndex& index,
                                std::span<const SeedAssignment> seeds, std::size_t n);

struct GloveIfResult {
  TrainingResult training;  // the final retrain
  WordVectors vectors;      // final vectors of that model
  CandidateSet candidates;
  CooccurrenceMatrix boosted;
  std::vector<std::string> skipped_seeds;
  std::size_t boosted_pairs = 0;
};

// Per round: train on the current matrix, expand every seed, boost all
// (seed, candidate) pairs in one plan. Then retrain from the same seed and
// report each seed's top-n neighbours. The input matrix is left untouched.
GloveIfResult run_gloveif(const CooccurrenceMatrix& matrix, const Vocabulary& vocab,
                          std::span<const SeedAssignment> seeds, const HyperParams& hp,
                          const FeedbackConfig& fc, const EpochCallback& on_epoch = {});

// "#candidates v1" header, then seed<TAB>rank<TAB>candidate<TAB>cosine sorted
// by seed and rank.
void export_candidates(const CandidateSet& candidates, const std::filesystem::path& path);

}  // namespace chvenrich
