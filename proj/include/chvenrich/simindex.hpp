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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/embeddings.hpp"

namespace chvenrich {

// u.v / (|u||v|). Throws Error on a dimension mismatch or a zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  TokenId id = 0;
  double cosine = 0.0;

  bool operator==(const Neighbor&) const = default;
};

class UnknownToken : public Error {
 public:
  explicit UnknownToken(std::string_view token)
      : Error("unknown token '" + std::string(token) + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Exact cosine nearest-neighbour search over unit-normalized copies of the
// vectors. Immutable; queries may run concurrently.
class SimilarityIndex {
 public:
  explicit SimilarityIndex(const WordVectors& vectors);

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return dim_; }
  std::optional<TokenId> lookup(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  // False for zero vectors, which never show up in results.
  bool has_vector(TokenId id) const { return nonzero_.at(id) != 0; }
  std::span<const double> unit_vector(TokenId id) const { return {unit_.data() + id * dim_, dim_}; }

  // The n best tokens by cosine, descending, ties by ascending id. Never
  // contains the query or excluded ids.
  std::vector<Neighbor> top_similar(TokenId query, std::size_t n,
                                    std::span<const TokenId> exclude = {}) const;
  // Throws UnknownToken when the query is not indexed.
  std::vector<Neighbor> top_similar(std::string_view query, std::size_t n,
                                    const std::unordered_set<std::string>& exclude = {}) const;

  // 1-based position of target in the query's full ranking, or 0 if the
  // target cannot appear (same token, zero vector).
  std::size_t rank_of(TokenId query, TokenId target) const;

 private:
  std::vector<double> scores(TokenId query) const;

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
  std::size_t dim_ = 0;
  std::vector<double> unit_;
  std::vector<char> nonzero_;
};

}  // namespace chvenrich
