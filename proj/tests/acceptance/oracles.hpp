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

// Reference computations the acceptance suite checks the library against.
// They share no code with the library beyond plain containers.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using PairWeights = std::map<std::pair<std::string, std::string>, double>;

// Symmetric distance-weighted counts by a double loop over token positions.
// Tokens not in `known` are dropped before positions are measured; the
// diagonal is skipped. Both orderings of each pair are present.
PairWeights cooccurrence(const std::vector<std::vector<std::string>>& docs,
                         const std::vector<std::string>& known, std::size_t window);

// f(x) * (w . c + bw + bc - ln x)^2, evaluated in long double.
long double glove_loss(const std::vector<double>& w, const std::vector<double>& c, double bw,
                       double bc, double x, double x_max, double alpha);

// 2PR / (P + R).
double harmonic(double p, double r);

// Rows for a star-shaped embedding: a seed, n neighbours, k private
// satellites per neighbour. Returned flat, row-major, with names.
struct Star {
  std::vector<std::string> tokens;
  std::size_t dim = 0;
  std::vector<double> values;
};
Star star(std::size_t n, std::size_t k);

// Median of a nonempty list (mean of the middle two for even sizes).
double median(std::vector<double> values);

// Minimal deterministic generator, independent of the library's Rng.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 33;
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double unit() { return static_cast<double>(next()) / 2147483648.0; }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
