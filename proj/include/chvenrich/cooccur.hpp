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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/preprocess.hpp"
#include "chvenrich/vocab.hpp"

namespace chvenrich {

// Upper-triangle cell (i < j); X_ji is implied by symmetry.
struct Cell {
  TokenId i = 0;
  TokenId j = 0;
  double weight = 0.0;

  bool operator==(const Cell&) const = default;
};

// Largest supported window. Counting runs in exact integer ticks of
// 1/lcm(1..window), which must stay well inside 64 bits.
inline constexpr std::size_t kMaxWindowSize = 24;

// Sparse symmetric co-occurrence matrix with no diagonal and no zero cells.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  // Cells must be strictly increasing in (i, j) with i < j < vocab_size and
  // weight > 0.
  CooccurrenceMatrix(std::size_t vocab_size, std::size_t window_size, std::vector<Cell> cells);

  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t window_size() const { return window_size_; }
  std::span<const Cell> cells() const { return cells_; }
  // Stored upper-triangle cells; the symmetric matrix has twice as many.
  std::size_t stored_cells() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  // X_ab, 0 when absent or a == b.
  double at(TokenId a, TokenId b) const;

  // Mean of the nonzero weights in each row (0 for an empty row).
  std::vector<double> row_means() const;

  // Header "#cooccur v1 vocab=<n> window=<w>", then i<TAB>j<TAB>weight with
  // i < j and 17 significant digits.
  void save_tsv(const std::filesystem::path& path) const;
  // Little-endian: "CHVCOOC1", u64 vocab, u64 window, u64 count, then count
  // records of (u32 i, u32 j, f64 weight).
  void save_binary(const std::filesystem::path& path) const;
  // Detects the format from the first bytes.
  static CooccurrenceMatrix load(const std::filesystem::path& path);

  bool operator==(const CooccurrenceMatrix&) const = default;

 private:
  std::size_t vocab_size_ = 0;
  std::size_t window_size_ = 0;
  std::vector<Cell> cells_;
};

// Accumulates distance-weighted counts (1/d for distance d <= window) in
// integer ticks, so shards can be merged in any order with bit-identical
// results.
class CooccurrenceCounter {
 public:
  CooccurrenceCounter(std::size_t vocab_size, std::size_t window_size);
  ~CooccurrenceCounter();
  CooccurrenceCounter(CooccurrenceCounter&&) noexcept;
  CooccurrenceCounter& operator=(CooccurrenceCounter&&) noexcept;

  // ids: one document with out-of-vocabulary tokens already removed.
  void add(std::span<const TokenId> ids);
  void merge(const CooccurrenceCounter& other);
  CooccurrenceMatrix finish() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Ids of the document's in-vocabulary tokens, in order.
std::vector<TokenId> to_ids(const Document& doc, const Vocabulary& vocab);

// threads > 1 counts contiguous document shards in parallel and merges them;
// the result does not depend on the thread count.
CooccurrenceMatrix build_matrix(std::span<const Document> documents, const Vocabulary& vocab,
                                std::size_t window_size, unsigned threads = 1);

enum class BoostKind { Constant, RowMeanScaled };

struct BoostPolicy {
  BoostKind kind = BoostKind::RowMeanScaled;
  double value = 1.0;

  // "row-mean:<beta>" or "constant:<c>".
  static BoostPolicy parse(std::string_view text);
  std::string to_string() const;
  std::vector<std::string> violations() const;

  bool operator==(const BoostPolicy&) const = default;
};

struct BoostPlan {
  std::vector<std::pair<TokenId, TokenId>> pairs;
  BoostPolicy policy;
  int rounds_applied = 0;
};

// Returns a copy of matrix with X_st and X_ts raised for every planned pair.
// Row means for row_mean_scaled are taken from the input matrix, before any
// boost in the plan lands. The input is not modified.
CooccurrenceMatrix apply_boost(const CooccurrenceMatrix& matrix, const BoostPlan& plan);

}  // namespace chvenrich
