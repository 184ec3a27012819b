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
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chvenrich/preprocess.hpp"
#include "chvenrich/vocab.hpp"

namespace chvenrich {

// A UMLS concept with its consumer-health terms in corpus token space.
struct Concept {
  std::string cui;
  std::string professional_name;
  std::vector<std::string> chv_terms;
  // Raw unigram each term was cleaned from; aligned with chv_terms.
  std::vector<std::string> source_terms;

  bool operator==(const Concept&) const = default;
};

// Parses "CUI<TAB>professional name<TAB>term1|term2|..." lines; '#' lines and
// blank lines are skipped. Multi-word terms are split into unigrams and every
// unigram goes through the same cleaner as the corpus. Throws Error naming the
// line for malformed input or a repeated CUI.
std::vector<Concept> parse_concepts(std::istream& in, const TokenCleaner& cleaner,
                                    std::string_view source = "<concepts>");
std::vector<Concept> load_concepts(const std::filesystem::path& path,
                                   const TokenCleaner& cleaner);

// True when the term only differs from a word of the professional name by
// case, digits, punctuation or one trailing 's'.
bool is_morphological_variant(std::string_view chv_term, std::string_view professional_name);

struct GroundTruthOptions {
  std::uint64_t min_term_count = 100;
  std::size_t min_terms = 2;

  std::vector<std::string> violations() const;
};

// Drops morphological variants and terms rarer than min_term_count, then
// keeps concepts left with at least min_terms terms. Throws
// Error("no evaluable concepts") when none survive.
std::vector<Concept> filter_ground_truth(std::span<const Concept> concepts,
                                         const Vocabulary& vocab,
                                         const GroundTruthOptions& options = {});

struct SeedAssignment {
  std::string cui;
  std::string seed;
  std::vector<std::string> targets;

  bool operator==(const SeedAssignment&) const = default;
};

// One uniformly drawn seed per concept; concepts need at least two terms.
std::vector<SeedAssignment> assign_seeds(std::span<const Concept> concepts,
                                         std::uint64_t rng_seed);

// "#seeds v1 concepts=N" header, then CUI<TAB>seed<TAB>t1|t2|...
void save_seeds(std::span<const SeedAssignment> seeds, const std::filesystem::path& path);
std::vector<SeedAssignment> load_seeds(const std::filesystem::path& path);

}  // namespace chvenrich
