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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/preprocess.hpp"

namespace chvenrich {

struct VocabEntry {
  std::string token;
  std::uint64_t count = 0;

  bool operator==(const VocabEntry&) const = default;
};

// Token <-> id map ordered by descending count, ties by ascending token.
// Immutable once built.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Entries must already be unique and in rank order.
  Vocabulary(std::vector<VocabEntry> entries, std::uint64_t min_count);

  std::optional<TokenId> lookup(std::string_view token) const;
  const std::string& token_at(TokenId id) const { return entries_.at(id).token; }
  std::uint64_t count_at(TokenId id) const { return entries_.at(id).count; }
  std::size_t size() const { return entries_.size(); }
  std::span<const VocabEntry> entries() const { return entries_; }
  std::uint64_t min_count() const { return min_count_; }
  std::uint64_t total_count() const;

  // "#vocab v1 size=N min_count=M" header, then token<TAB>count in rank
  // order; a token's id is its data-line index.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const {
    return entries_ == other.entries_ && min_count_ == other.min_count_;
  }

 private:
  std::vector<VocabEntry> entries_;
  std::uint64_t min_count_ = 1;
  std::unordered_map<std::string, TokenId> index_;
};

// Per-shard token counts; merging is order independent.
class VocabCounter {
 public:
  void add(const Document& doc);
  void merge(const VocabCounter& other);
  // Throws Error("no tokens survive min_count") when nothing is left.
  Vocabulary build(std::uint64_t min_count) const;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

Vocabulary build_vocabulary(std::span<const Document> documents, std::uint64_t min_count);

}  // namespace chvenrich
