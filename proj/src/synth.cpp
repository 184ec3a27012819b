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

#include "chvenrich/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "chvenrich/common.hpp"
#include "chvenrich/preprocess.hpp"

namespace chvenrich {

namespace {

class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cdf_[r] = total;
    }
    for (double& c : cdf_) c /= total;
  }

  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

std::vector<std::string> pseudo_words(std::size_t n, std::uint64_t seed) {
  static constexpr std::string_view kConsonants = "bdfgklmnprtvz";
  static constexpr std::string_view kVowels = "aou";
  const TokenCleaner cleaner(default_cleaning_config());
  Rng rng(derive_seed(seed, "pseudo-words"));
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(n);
  while (out.size() < n) {
    const std::size_t syllables = 3 + rng.uniform_index(2);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w.push_back(kConsonants[rng.uniform_index(kConsonants.size())]);
      w.push_back(kVowels[rng.uniform_index(kVowels.size())]);
    }
    const auto cleaned = cleaner.clean(w);
    if (!cleaned || *cleaned != w) continue;
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

PlantedCorpus generate_planted_corpus(const PlantedCorpusOptions& options) {
  if (options.vocab_size < 2 * options.pairs + options.contexts_per_pair) {
    throw ValidationError({"planted corpus vocabulary too small for the requested pairs"});
  }
  Rng rng(derive_seed(options.seed, "planted-corpus"));
  const auto words = pseudo_words(options.vocab_size, options.seed);

  PlantedCorpus corpus;
  const std::size_t planted = 2 * options.pairs;
  for (std::size_t p = 0; p < options.pairs; ++p) {
    corpus.pairs.emplace_back(words[2 * p], words[2 * p + 1]);
  }
  const std::vector<std::string> background(words.begin() + static_cast<std::ptrdiff_t>(planted),
                                            words.end());

  // Each pair draws its own context set from the background words; sets of
  // different pairs may overlap.
  std::vector<std::vector<std::size_t>> contexts(options.pairs);
  for (auto& ctx : contexts) {
    std::vector<std::size_t> pool(background.size());
    for (std::size_t k = 0; k < pool.size(); ++k) pool[k] = k;
    for (std::size_t k = 0; k < options.contexts_per_pair; ++k) {
      const std::size_t pick = k + rng.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      ctx.push_back(pool[k]);
    }
  }

  const ZipfSampler zipf(background.size());
  std::string doc;
  std::size_t doc_tokens = 0;
  auto emit = [&](const std::string& w) {
    if (!doc.empty()) doc.push_back(' ');
    doc += w;
    ++doc_tokens;
    ++corpus.token_count;
  };
  while (corpus.token_count < options.target_tokens) {
    if (rng.uniform() < options.mention_rate) {
      const std::size_t p = rng.uniform_index(options.pairs);
      const auto& term = rng.uniform_index(2) == 0 ? corpus.pairs[p].first : corpus.pairs[p].second;
      const auto& ctx = contexts[p];
      for (std::size_t k = 0; k < options.block_context; ++k) {
        emit(background[ctx[rng.uniform_index(ctx.size())]]);
      }
      emit(term);
      for (std::size_t k = 0; k < options.block_context; ++k) {
        emit(background[ctx[rng.uniform_index(ctx.size())]]);
      }
    } else {
      emit(background[zipf(rng)]);
    }
    if (doc_tokens >= options.doc_length) {
      corpus.documents.push_back(std::move(doc));
      doc.clear();
      doc_tokens = 0;
    }
  }
  if (!doc.empty()) corpus.documents.push_back(std::move(doc));
  return corpus;
}

std::string planted_concepts_tsv(const PlantedCorpus& corpus) {
  std::string out = "# CUI\tprofessional name\tCHV terms\n";
  char cui[16];
  for (std::size_t p = 0; p < corpus.pairs.size(); ++p) {
    std::snprintf(cui, sizeof(cui), "C%07zu", p + 1);
    out += cui;
    out += "\tplanted concept\t";
    out += corpus.pairs[p].first + "|" + corpus.pairs[p].second + "\n";
  }
  return out;
}

std::vector<std::string> generate_zipf_corpus(std::size_t tokens, std::size_t vocab_size,
                                              std::size_t doc_length, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "zipf-corpus"));
  const auto words = pseudo_words(vocab_size, seed);
  const ZipfSampler zipf(vocab_size);
  std::vector<std::string> docs;
  std::string doc;
  for (std::size_t t = 0; t < tokens; ++t) {
    if (!doc.empty()) doc.push_back(' ');
    doc += words[zipf(rng)];
    if ((t + 1) % doc_length == 0) {
      docs.push_back(std::move(doc));
      doc.clear();
    }
  }
  if (!doc.empty()) docs.push_back(std::move(doc));
  return docs;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw Error("write failure on " + path.string());
}

}  // namespace chvenrich
