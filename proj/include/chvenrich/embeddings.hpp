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
#include <span>
#include <string>
#include <vector>

#include "chvenrich/trainer.hpp"
#include "chvenrich/vocab.hpp"

namespace chvenrich {

// Token-labelled final vectors, row i belonging to tokens[i]. This is what
// gets written, imported from other tools, and indexed for similarity.
struct WordVectors {
  std::vector<std::string> tokens;
  std::size_t dim = 0;
  std::vector<double> values;

  std::size_t size() const { return tokens.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

  bool operator==(const WordVectors&) const = default;
};

WordVectors to_word_vectors(const EmbeddingModel& model, const Vocabulary& vocab,
                            VectorMode mode = VectorMode::Sum);

// Text format shared with word2vec and fastText: "<count> <dim>" on line 1,
// then "token v1 ... vdim" per line.
void save_word_vectors(const WordVectors& vectors, const std::filesystem::path& path);
WordVectors load_word_vectors(const std::filesystem::path& path);

// One JSON object per epoch: {"epoch":..,"J":..,"seconds":..}.
void save_training_log(std::span<const EpochStats> epochs, const std::filesystem::path& path);

}  // namespace chvenrich
