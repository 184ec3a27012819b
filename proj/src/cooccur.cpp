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

#include "chvenrich/cooccur.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>

namespace chvenrich {

namespace {

constexpr std::uint64_t pair_key(TokenId a, TokenId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::uint64_t tick_scale(std::size_t window) {
  std::uint64_t l = 1;
  for (std::uint64_t d = 2; d <= window; ++d) l = std::lcm(l, d);
  return l;
}

void check_window(std::size_t window) {
  if (window < 1 || window > kMaxWindowSize) {
    throw ValidationError({"window_size must be in [1, " + std::to_string(kMaxWindowSize) +
                           "], got " + std::to_string(window)});
  }
}

constexpr char kBinaryMagic[8] = {'C', 'H', 'V', 'C', 'O', 'O', 'C', '1'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_le(std::istream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw Error("truncated binary matrix " + path.string());
  return value;
}

}  // namespace

CooccurrenceMatrix::CooccurrenceMatrix(std::size_t vocab_size, std::size_t window_size,
                                       std::vector<Cell> cells)
    : vocab_size_(vocab_size), window_size_(window_size), cells_(std::move(cells)) {
  for (std::size_t k = 0; k < cells_.size(); ++k) {
    const Cell& c = cells_[k];
    if (c.i >= c.j || c.j >= vocab_size_) {
      throw Error("invalid co-occurrence cell (" + std::to_string(c.i) + ", " +
                  std::to_string(c.j) + ")");
    }
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw Error("non-positive co-occurrence weight at (" + std::to_string(c.i) + ", " +
                  std::to_string(c.j) + ")");
    }
    if (k > 0 && pair_key(cells_[k - 1].i, cells_[k - 1].j) >= pair_key(c.i, c.j)) {
      throw Error("co-occurrence cells out of order at index " + std::to_string(k));
    }
  }
}

double CooccurrenceMatrix::at(TokenId a, TokenId b) const {
  if (a == b) return 0.0;
  if (a > b) std::swap(a, b);
  const auto key = pair_key(a, b);
  const auto it = std::lower_bound(cells_.begin(), cells_.end(), key, [](const Cell& c, auto k) {
    return pair_key(c.i, c.j) < k;
  });
  if (it == cells_.end() || it->i != a || it->j != b) return 0.0;
  return it->weight;
}

std::vector<double> CooccurrenceMatrix::row_means() const {
  std::vector<double> sum(vocab_size_, 0.0);
  std::vector<std::size_t> count(vocab_size_, 0);
  for (const auto& c : cells_) {
    sum[c.i] += c.weight;
    sum[c.j] += c.weight;
    ++count[c.i];
    ++count[c.j];
  }
  for (std::size_t r = 0; r < vocab_size_; ++r) {
    if (count[r] > 0) sum[r] /= static_cast<double>(count[r]);
  }
  return sum;
}

void CooccurrenceMatrix::save_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "#cooccur v1 vocab=" << vocab_size_ << " window=" << window_size_ << '\n';
  for (const auto& c : cells_) {
    out << c.i << '\t' << c.j << '\t' << format_double17(c.weight) << '\n';
  }
  if (!out) throw Error("write failure on " + path.string());
}

void CooccurrenceMatrix::save_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  write_le<std::uint64_t>(out, vocab_size_);
  write_le<std::uint64_t>(out, window_size_);
  write_le<std::uint64_t>(out, cells_.size());
  for (const auto& c : cells_) {
    write_le<std::uint32_t>(out, c.i);
    write_le<std::uint32_t>(out, c.j);
    write_le<double>(out, c.weight);
  }
  if (!out) throw Error("write failure on " + path.string());
}

CooccurrenceMatrix CooccurrenceMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open co-occurrence matrix " + path.string());
  char magic[sizeof(kBinaryMagic)] = {};
  in.read(magic, sizeof(magic));
  if (in && std::memcmp(magic, kBinaryMagic, sizeof(magic)) == 0) {
    const auto vocab = read_le<std::uint64_t>(in, path);
    const auto window = read_le<std::uint64_t>(in, path);
    const auto count = read_le<std::uint64_t>(in, path);
    std::vector<Cell> cells;
    cells.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
      Cell c;
      c.i = read_le<std::uint32_t>(in, path);
      c.j = read_le<std::uint32_t>(in, path);
      c.weight = read_le<double>(in, path);
      cells.push_back(c);
    }
    return CooccurrenceMatrix(vocab, window, std::move(cells));
  }

  in.clear();
  in.seekg(0);
  std::string header;
  std::getline(in, header);
  std::size_t vocab = 0;
  std::size_t window = 0;
  {
    if (header.rfind("#cooccur v1", 0) != 0) {
      throw Error(path.string() + ": missing '#cooccur v1' header");
    }
    for (auto field : split(header, ' ')) {
      if (field.rfind("vocab=", 0) == 0) vocab = parse_u64(field.substr(6), "vocab");
      if (field.rfind("window=", 0) == 0) window = parse_u64(field.substr(7), "window");
    }
  }
  std::vector<Cell> cells;
  std::size_t line_no = 1;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected i<TAB>j<TAB>weight");
    }
    cells.push_back({static_cast<TokenId>(parse_u64(fields[0], "row id")),
                     static_cast<TokenId>(parse_u64(fields[1], "column id")),
                     parse_double(fields[2], "weight")});
  }
  return CooccurrenceMatrix(vocab, window, std::move(cells));
}

struct CooccurrenceCounter::Impl {
  std::size_t vocab_size;
  std::size_t window;
  std::uint64_t scale;
  std::vector<std::uint64_t> ticks_at_distance;
  absl::flat_hash_map<std::uint64_t, std::uint64_t> ticks;
};

CooccurrenceCounter::CooccurrenceCounter(std::size_t vocab_size, std::size_t window_size) {
  check_window(window_size);
  impl_ = std::make_unique<Impl>();
  impl_->vocab_size = vocab_size;
  impl_->window = window_size;
  impl_->scale = tick_scale(window_size);
  impl_->ticks_at_distance.resize(window_size + 1, 0);
  for (std::size_t d = 1; d <= window_size; ++d) impl_->ticks_at_distance[d] = impl_->scale / d;
}

CooccurrenceCounter::~CooccurrenceCounter() = default;
CooccurrenceCounter::CooccurrenceCounter(CooccurrenceCounter&&) noexcept = default;
CooccurrenceCounter& CooccurrenceCounter::operator=(CooccurrenceCounter&&) noexcept = default;

void CooccurrenceCounter::add(std::span<const TokenId> ids) {
  auto& ticks = impl_->ticks;
  const std::size_t n = ids.size();
  for (std::size_t p = 0; p < n; ++p) {
    const TokenId a = ids[p];
    const std::size_t last = std::min(n - 1, p + impl_->window);
    for (std::size_t q = p + 1; q <= last; ++q) {
      const TokenId b = ids[q];
      if (a == b) continue;
      ticks[a < b ? pair_key(a, b) : pair_key(b, a)] += impl_->ticks_at_distance[q - p];
    }
  }
}

void CooccurrenceCounter::merge(const CooccurrenceCounter& other) {
  if (other.impl_->window != impl_->window || other.impl_->vocab_size != impl_->vocab_size) {
    throw Error("cannot merge co-occurrence counters with different shapes");
  }
  for (const auto& [key, t] : other.impl_->ticks) impl_->ticks[key] += t;
}

CooccurrenceMatrix CooccurrenceCounter::finish() const {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries(impl_->ticks.begin(),
                                                               impl_->ticks.end());
  std::sort(entries.begin(), entries.end());
  std::vector<Cell> cells;
  cells.reserve(entries.size());
  const double scale = static_cast<double>(impl_->scale);
  for (const auto& [key, t] : entries) {
    cells.push_back({static_cast<TokenId>(key >> 32), static_cast<TokenId>(key & 0xffffffffu),
                     static_cast<double>(t) / scale});
  }
  return CooccurrenceMatrix(impl_->vocab_size, impl_->window, std::move(cells));
}

std::vector<TokenId> to_ids(const Document& doc, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    if (auto id = vocab.lookup(t)) ids.push_back(*id);
  }
  return ids;
}

CooccurrenceMatrix build_matrix(std::span<const Document> documents, const Vocabulary& vocab,
                                std::size_t window_size, unsigned threads) {
  check_window(window_size);
  threads = std::max(1u, threads);
  std::vector<CooccurrenceCounter> shards;
  for (unsigned t = 0; t < threads; ++t) shards.emplace_back(vocab.size(), window_size);

  const std::size_t per_shard = (documents.size() + threads - 1) / threads;
  auto count_shard = [&](unsigned t) {
    const std::size_t begin = std::min(documents.size(), t * per_shard);
    const std::size_t end = std::min(documents.size(), begin + per_shard);
    for (std::size_t d = begin; d < end; ++d) shards[t].add(to_ids(documents[d], vocab));
  };
  if (threads == 1) {
    count_shard(0);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back(count_shard, t);
  }
  for (unsigned t = 1; t < threads; ++t) shards[0].merge(shards[t]);
  return shards[0].finish();
}

BoostPolicy BoostPolicy::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ValidationError({"boost policy must be 'row-mean:<beta>' or 'constant:<c>', got '" +
                           std::string(text) + "'"});
  }
  const auto name = text.substr(0, colon);
  BoostPolicy policy;
  if (name == "row-mean") {
    policy.kind = BoostKind::RowMeanScaled;
  } else if (name == "constant" || name == "const") {
    policy.kind = BoostKind::Constant;
  } else {
    throw ValidationError({"unknown boost policy '" + std::string(name) + "'"});
  }
  try {
    policy.value = parse_double(text.substr(colon + 1), "boost value");
  } catch (const Error& e) {
    throw ValidationError({e.what()});
  }
  return policy;
}

std::string BoostPolicy::to_string() const {
  return (kind == BoostKind::RowMeanScaled ? "row-mean:" : "constant:") + format_double(value);
}

std::vector<std::string> BoostPolicy::violations() const {
  if (!(value > 0.0) || !std::isfinite(value)) return {"boost increment > 0"};
  return {};
}

CooccurrenceMatrix apply_boost(const CooccurrenceMatrix& matrix, const BoostPlan& plan) {
  if (plan.pairs.empty()) return matrix;
  if (auto v = plan.policy.violations(); !v.empty()) throw ValidationError(std::move(v));

  std::vector<double> means;
  double fallback_mean = 0.0;
  if (plan.policy.kind == BoostKind::RowMeanScaled) {
    means = matrix.row_means();
    double total = 0.0;
    for (const auto& c : matrix.cells()) total += c.weight;
    fallback_mean = matrix.empty() ? 1.0 : total / static_cast<double>(matrix.stored_cells());
  }

  std::vector<std::pair<std::uint64_t, double>> increments;
  increments.reserve(plan.pairs.size());
  std::size_t empty_rows = 0;
  for (const auto& [s, t] : plan.pairs) {
    if (s >= matrix.vocab_size() || t >= matrix.vocab_size()) {
      throw Error("boost pair (" + std::to_string(s) + ", " + std::to_string(t) +
                  ") outside vocabulary of size " + std::to_string(matrix.vocab_size()));
    }
    if (s == t) throw Error("boost pair with identical ids " + std::to_string(s));
    double inc = plan.policy.value;
    if (plan.policy.kind == BoostKind::RowMeanScaled) {
      double mean = means[s];
      if (mean <= 0.0) {
        mean = fallback_mean;
        ++empty_rows;
      }
      inc *= mean;
    }
    increments.emplace_back(s < t ? pair_key(s, t) : pair_key(t, s), inc);
  }
  if (empty_rows > 0) {
    log_warning(std::to_string(empty_rows) +
                " boost pair(s) start from an empty row; using the global mean weight");
  }
  std::stable_sort(increments.begin(), increments.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Cell> merged;
  merged.reserve(matrix.stored_cells() + increments.size());
  const auto cells = matrix.cells();
  std::size_t c = 0;
  std::size_t k = 0;
  while (c < cells.size() || k < increments.size()) {
    const std::uint64_t cell_key =
        c < cells.size() ? pair_key(cells[c].i, cells[c].j) : ~std::uint64_t{0};
    const std::uint64_t inc_key = k < increments.size() ? increments[k].first : ~std::uint64_t{0};
    if (cell_key < inc_key) {
      merged.push_back(cells[c++]);
      continue;
    }
    double add = 0.0;
    while (k < increments.size() && increments[k].first == inc_key) add += increments[k++].second;
    if (cell_key == inc_key) {
      Cell updated = cells[c++];
      updated.weight += add;
      merged.push_back(updated);
    } else {
      merged.push_back({static_cast<TokenId>(inc_key >> 32),
                        static_cast<TokenId>(inc_key & 0xffffffffu), add});
    }
  }
  return CooccurrenceMatrix(matrix.vocab_size(), matrix.window_size(), std::move(merged));
}

}  // namespace chvenrich
