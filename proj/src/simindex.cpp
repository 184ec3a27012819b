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

#include "chvenrich/simindex.hpp"

#include <algorithm>
#include <cmath>

namespace chvenrich {

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error("cosine of vectors with different dimensions (" + std::to_string(u.size()) +
                " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) throw Error("cosine of a zero-norm vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

SimilarityIndex::SimilarityIndex(const WordVectors& vectors)
    : tokens_(vectors.tokens), dim_(vectors.dim), unit_(vectors.values) {
  if (unit_.size() != tokens_.size() * dim_) throw Error("word vector table has a ragged shape");
  nonzero_.assign(tokens_.size(), 0);
  ids_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    ids_.emplace(tokens_[i], static_cast<TokenId>(i));
    double* row = unit_.data() + i * dim_;
    double norm = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) norm += row[k] * row[k];
    norm = std::sqrt(norm);
    if (norm > 0.0 && std::isfinite(norm)) {
      for (std::size_t k = 0; k < dim_; ++k) row[k] /= norm;
      nonzero_[i] = 1;
    } else {
      std::fill(row, row + dim_, 0.0);
    }
  }
}

std::optional<TokenId> SimilarityIndex::lookup(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> SimilarityIndex::scores(TokenId query) const {
  std::vector<double> out(tokens_.size(), 0.0);
  const auto q = unit_vector(query);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const double* row = unit_.data() + i * dim_;
    double dot = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) dot += q[k] * row[k];
    out[i] = std::clamp(dot, -1.0, 1.0);
  }
  return out;
}

std::vector<Neighbor> SimilarityIndex::top_similar(TokenId query, std::size_t n,
                                                   std::span<const TokenId> exclude) const {
  if (n < 1) throw ValidationError({"top-n >= 1"});
  if (query >= size()) throw Error("token id " + std::to_string(query) + " out of range");
  if (!has_vector(query)) return {};
  const auto s = scores(query);
  std::vector<char> skip(size(), 0);
  skip[query] = 1;
  for (TokenId id : exclude) {
    if (id < size()) skip[id] = 1;
  }
  std::vector<Neighbor> candidates;
  candidates.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (!skip[i] && nonzero_[i]) candidates.push_back({static_cast<TokenId>(i), s[i]});
  }
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.id < b.id;
  };
  const std::size_t keep = std::min(n, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), better);
  candidates.resize(keep);
  return candidates;
}

std::vector<Neighbor> SimilarityIndex::top_similar(
    std::string_view query, std::size_t n, const std::unordered_set<std::string>& exclude) const {
  const auto id = lookup(query);
  if (!id) throw UnknownToken(query);
  std::vector<TokenId> excluded;
  for (const auto& t : exclude) {
    if (auto e = lookup(t)) excluded.push_back(*e);
  }
  return top_similar(*id, n, excluded);
}

std::size_t SimilarityIndex::rank_of(TokenId query, TokenId target) const {
  if (query >= size() || target >= size()) throw Error("token id out of range");
  if (query == target || !has_vector(query) || !has_vector(target)) return 0;
  const auto s = scores(query);
  std::size_t rank = 1;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i == query || i == target || !nonzero_[i]) continue;
    if (s[i] > s[target] || (s[i] == s[target] && i < target)) ++rank;
  }
  return rank;
}

}  // namespace chvenrich
