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

#include "chvenrich/enrich.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>

#include "chvenrich/embeddings.hpp"

namespace chvenrich {

std::vector<std::string> FeedbackConfig::violations() const {
  std::vector<std::string> out;
  if (top_n < 1) out.emplace_back("top_n >= 1");
  if (rounds < 1) out.emplace_back("rounds >= 1");
  for (auto& v : boost.violations()) out.push_back(std::move(v));
  return out;
}

std::vector<TokenId> expand_seed(const SimilarityIndex& index, TokenId seed, std::size_t n,
                                 std::size_t k) {
  std::vector<TokenId> out;
  std::vector<char> taken(index.size(), 0);
  taken[seed] = 1;
  const auto first = index.top_similar(seed, n);
  for (const auto& nb : first) {
    if (!taken[nb.id]) {
      taken[nb.id] = 1;
      out.push_back(nb.id);
    }
  }
  if (k == 0) return out;
  for (const auto& nb : first) {
    for (const auto& second : index.top_similar(nb.id, k)) {
      if (!taken[second.id]) {
        taken[second.id] = 1;
        out.push_back(second.id);
      }
    }
  }
  return out;
}

std::optional<std::vector<std::string>> expand_seed(const SimilarityIndex& index,
                                                    std::string_view seed, std::size_t n,
                                                    std::size_t k) {
  const auto id = index.lookup(seed);
  if (!id) {
    log_warning("seed '" + std::string(seed) + "' is not in the vocabulary; skipped");
    return std::nullopt;
  }
  std::vector<std::string> out;
  for (TokenId t : expand_seed(index, *id, n, k)) out.push_back(index.token(t));
  return out;
}

CandidateSet nearest_candidates(const SimilarityIndex& index,
                                std::span<const SeedAssignment> seeds, std::size_t n) {
  CandidateSet out;
  for (const auto& s : seeds) {
    const auto id = index.lookup(s.seed);
    if (!id || out.by_seed.contains(s.seed)) continue;
    auto& list = out.by_seed[s.seed];
    for (const auto& nb : index.top_similar(*id, n)) {
      list.push_back({index.token(nb.id), nb.cosine, 0});
    }
  }
  return out;
}

GloveIfResult run_gloveif(const CooccurrenceMatrix& matrix, const Vocabulary& vocab,
                          std::span<const SeedAssignment> seeds, const HyperParams& hp,
                          const FeedbackConfig& fc, const EpochCallback& on_epoch) {
  if (auto v = fc.violations(); !v.empty()) throw ValidationError(std::move(v));
  if (seeds.empty()) throw Error("GloVeIF needs at least one seed");
  if (matrix.vocab_size() != vocab.size()) {
    throw Error("matrix and vocabulary sizes differ (" + std::to_string(matrix.vocab_size()) +
                " vs " + std::to_string(vocab.size()) + ")");
  }

  GloveIfResult result;
  result.boosted = matrix;

  // Unique seed ids in first-seen order.
  std::vector<TokenId> seed_ids;
  {
    std::set<TokenId> seen;
    std::set<std::string> skipped;
    for (const auto& s : seeds) {
      const auto id = vocab.lookup(s.seed);
      if (!id) {
        if (skipped.insert(s.seed).second) {
          log_warning("seed '" + s.seed + "' (" + s.cui + ") is not in the vocabulary; skipped");
          result.skipped_seeds.push_back(s.seed);
        }
        continue;
      }
      if (seen.insert(*id).second) seed_ids.push_back(*id);
    }
  }

  std::unordered_map<TokenId, std::unordered_map<TokenId, int>> first_round;
  for (int round = 1; round <= fc.rounds; ++round) {
    const auto trained = train(result.boosted, hp, on_epoch);
    const SimilarityIndex index(to_word_vectors(trained.model, vocab, hp.vectors));

    BoostPlan plan;
    plan.policy = fc.boost;
    plan.rounds_applied = round;
    for (TokenId seed : seed_ids) {
      const auto expanded = expand_seed(index, seed, fc.top_n, fc.top_k);
      auto& seen = first_round[seed];
      for (TokenId t : expanded) {
        seen.emplace(t, round);
        plan.pairs.emplace_back(seed, t);
      }
      if (fc.pairs == BoostPairs::AllPairs) {
        for (std::size_t a = 0; a < expanded.size(); ++a) {
          for (std::size_t b = a + 1; b < expanded.size(); ++b) {
            plan.pairs.emplace_back(expanded[a], expanded[b]);
          }
        }
      }
    }
    result.boosted_pairs += plan.pairs.size();
    result.boosted = apply_boost(result.boosted, plan);
  }

  result.training = train(result.boosted, hp, on_epoch);
  result.vectors = to_word_vectors(result.training.model, vocab, hp.vectors);
  const SimilarityIndex index(result.vectors);
  for (TokenId seed : seed_ids) {
    auto& list = result.candidates.by_seed[vocab.token_at(seed)];
    const auto& seen = first_round[seed];
    for (const auto& nb : index.top_similar(seed, fc.top_n)) {
      const auto it = seen.find(nb.id);
      list.push_back({vocab.token_at(nb.id), nb.cosine,
                      it == seen.end() ? fc.rounds + 1 : it->second});
    }
  }
  return result;
}

void export_candidates(const CandidateSet& candidates, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "#candidates v1\n";
  char buf[32];
  for (const auto& [seed, list] : candidates.by_seed) {
    for (std::size_t r = 0; r < list.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.6f", list[r].cosine);
      out << seed << '\t' << (r + 1) << '\t' << list[r].token << '\t' << buf << '\n';
    }
  }
  if (!out) throw Error("write failure on " + path.string());
}

}  // namespace chvenrich
