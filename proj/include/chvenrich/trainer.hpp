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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/cooccur.hpp"

namespace chvenrich {

// Which vectors represent a word after training: w + w~ (the usual GloVe
// output) or the main vectors alone.
enum class VectorMode { Sum, Main };

struct HyperParams {
  std::size_t dim = 100;
  double x_max = 100.0;
  double alpha = 0.75;
  double learning_rate = 0.05;
  int epochs = 25;
  std::uint64_t rng_seed = 0;
  // 1 = deterministic single updater; > 1 = lock-free asynchronous updates.
  unsigned threads = 1;
  // Bound on |f(X) * residual| per update.
  double clip = 100.0;
  VectorMode vectors = VectorMode::Sum;

  std::vector<std::string> violations() const;
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // All parameters zero.
  EmbeddingModel(std::size_t vocab_size, std::size_t dim);

  std::size_t vocab_size() const { return main_bias_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<double> main(TokenId i) { return {main_.data() + i * dim_, dim_}; }
  std::span<const double> main(TokenId i) const { return {main_.data() + i * dim_, dim_}; }
  std::span<double> context(TokenId i) { return {context_.data() + i * dim_, dim_}; }
  std::span<const double> context(TokenId i) const { return {context_.data() + i * dim_, dim_}; }
  double& main_bias(TokenId i) { return main_bias_[i]; }
  double main_bias(TokenId i) const { return main_bias_[i]; }
  double& context_bias(TokenId i) { return context_bias_[i]; }
  double context_bias(TokenId i) const { return context_bias_[i]; }

  // w_i + w~_i (or w_i alone with VectorMode::Main).
  std::vector<double> final_vector(TokenId i, VectorMode mode = VectorMode::Sum) const;

  bool all_finite() const;

  bool operator==(const EmbeddingModel&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> main_;
  std::vector<double> context_;
  std::vector<double> main_bias_;
  std::vector<double> context_bias_;
};

// f(x) = (x / x_max)^alpha below the cutoff, 1 at and above it.
double weight_fn(double x, double x_max, double alpha);

// f(X_ij) * (w_i . w~_j + b_i + b~_j - ln X_ij)^2. Throws Error for x <= 0.
double cell_loss(const EmbeddingModel& model, TokenId i, TokenId j, double x,
                 const HyperParams& hp);

// Gradient of cell_loss with respect to w_i, w~_j, b_i and b~_j.
struct CellGradient {
  std::vector<double> main;
  std::vector<double> context;
  double main_bias = 0.0;
  double context_bias = 0.0;
};
CellGradient cell_gradient(const EmbeddingModel& model, TokenId i, TokenId j, double x,
                           const HyperParams& hp);

// J summed over every nonzero cell of the symmetric matrix (both orderings).
double objective(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
                 const HyperParams& hp);

// Uniform in (-0.5/dim, 0.5/dim) from hp.rng_seed; biases zero.
EmbeddingModel initialize_model(std::size_t vocab_size, const HyperParams& hp);

struct EpochStats {
  int epoch = 0;
  // Sum of per-cell losses seen during the epoch, before each update.
  double cost = 0.0;
  double seconds = 0.0;
  std::size_t clipped = 0;
};

struct TrainingResult {
  EmbeddingModel model;
  std::vector<EpochStats> epochs;
};

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(int epoch, std::size_t cell_index);
  int epoch() const { return epoch_; }
  std::size_t cell_index() const { return cell_index_; }

 private:
  int epoch_;
  std::size_t cell_index_;
};

// Visit order for one epoch over the 2 * stored_cells ordered entries.
// Entry 2c is (i, j) of cell c and 2c + 1 is (j, i). The order is a sort by a
// per-epoch hash of the token pair, so inserting cells never reorders the
// existing ones relative to each other.
std::vector<std::uint32_t> epoch_visit_order(const CooccurrenceMatrix& matrix,
                                             std::uint64_t epoch_seed);

using EpochCallback = std::function<void(const EpochStats&)>;

// AdaGrad on the weighted least-squares objective. Accumulators start at 1
// and each step is lr * g / sqrt(accumulator) before the accumulator is
// updated.
TrainingResult train(const CooccurrenceMatrix& matrix, const HyperParams& hp,
                     const EpochCallback& on_epoch = {});

}  // namespace chvenrich
