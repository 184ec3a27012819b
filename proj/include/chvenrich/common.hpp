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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chvenrich {

using TokenId = std::uint32_t;

// Runtime failure (I/O, corrupted input, divergence). Maps to CLI exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments. Maps to CLI exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Deterministic random source. The raw engine is std::mt19937_64 whose output
// sequence is fixed by the standard; the distributions below are written out
// by hand so results do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi);
  // Uniform in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Labeled seed derivation: every stage draws from its own substream of the
// single run seed.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Returns the byte offset of the first invalid UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text);

// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

// Shortest representation that round-trips to the same double.
std::string format_double(double value);
// Fixed 17 significant digits ("%.17g").
std::string format_double17(double value);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

std::vector<std::string_view> split(std::string_view text, char delim);
std::string_view trim(std::string_view text);

void log_info(std::string_view message);
void log_warning(std::string_view message);

}  // namespace chvenrich
