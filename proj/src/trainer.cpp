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

#include "chvenrich/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace chvenrich {

std::vector<std::string> HyperParams::violations() const {
  std::vector<std::string> out;
  if (dim < 1) out.emplace_back("dim >= 1");
  if (!(x_max > 0.0)) out.emplace_back("x_max > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) out.emplace_back("0 < alpha <= 1");
  if (!(learning_rate > 0.0)) out.emplace_back("learning_rate > 0");
  if (epochs < 1) out.emplace_back("epochs >= 1");
  if (threads < 1) out.emplace_back("threads >= 1");
  if (!(clip > 0.0)) out.emplace_back("clip > 0");
  return out;
}

EmbeddingModel::EmbeddingModel(std::size_t vocab_size, std::size_t dim)
    : dim_(dim),
      main_(vocab_size * dim, 0.0),
      context_(vocab_size * dim, 0.0),
      main_bias_(vocab_size, 0.0),
      context_bias_(vocab_size, 0.0) {}

std::vector<double> EmbeddingModel::final_vector(TokenId i, VectorMode mode) const {
  if (i >= vocab_size()) throw Error("token id " + std::to_string(i) + " out of range");
  const auto w = main(i);
  std::vector<double> out(w.begin(), w.end());
  if (mode == VectorMode::Sum) {
    const auto c = context(i);
    for (std::size_t k = 0; k < dim_; ++k) out[k] += c[k];
  }
  return out;
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(main_) && finite(context_) && finite(main_bias_) && finite(context_bias_);
}

double weight_fn(double x, double x_max, double alpha) {
  if (x >= x_max) return 1.0;
  return std::pow(x / x_max, alpha);
}

namespace {

double residual(const EmbeddingModel& model, TokenId i, TokenId j, double x) {
  if (!(x > 0.0)) {
    throw Error("co-occurrence weight must be positive, got " + format_double(x) + " at (" +
                std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  const auto w = model.main(i);
  const auto c = model.context(j);
  double dot = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) dot += w[k] * c[k];
  return dot + model.main_bias(i) + model.context_bias(j) - std::log(x);
}

}  // namespace

double cell_loss(const EmbeddingModel& model, TokenId i, TokenId j, double x,
                 const HyperParams& hp) {
  const double diff = residual(model, i, j, x);
  return weight_fn(x, hp.x_max, hp.alpha) * diff * diff;
}

CellGradient cell_gradient(const EmbeddingModel& model, TokenId i, TokenId j, double x,
                           const HyperParams& hp) {
  const double g = 2.0 * weight_fn(x, hp.x_max, hp.alpha) * residual(model, i, j, x);
  CellGradient out;
  const auto w = model.main(i);
  const auto c = model.context(j);
  out.main.resize(w.size());
  out.context.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    out.main[k] = g * c[k];
    out.context[k] = g * w[k];
  }
  out.main_bias = g;
  out.context_bias = g;
  return out;
}

double objective(const EmbeddingModel& model, const CooccurrenceMatrix& matrix,
                 const HyperParams& hp) {
  double total = 0.0;
  for (const auto& c : matrix.cells()) {
    total += cell_loss(model, c.i, c.j, c.weight, hp);
    total += cell_loss(model, c.j, c.i, c.weight, hp);
  }
  return total;
}

EmbeddingModel initialize_model(std::size_t vocab_size, const HyperParams& hp) {
  EmbeddingModel model(vocab_size, hp.dim);
  Rng rng(hp.rng_seed);
  const double half = 0.5 / static_cast<double>(hp.dim);
  for (TokenId i = 0; i < vocab_size; ++i) {
    for (double& v : model.main(i)) v = rng.uniform(-half, half);
  }
  for (TokenId i = 0; i < vocab_size; ++i) {
    for (double& v : model.context(i)) v = rng.uniform(-half, half);
  }
  return model;
}

TrainingDiverged::TrainingDiverged(int epoch, std::size_t cell_index)
    : Error("training diverged (non-finite value) in epoch " + std::to_string(epoch) +
            " at cell " + std::to_string(cell_index) + "; lower the learning rate"),
      epoch_(epoch),
      cell_index_(cell_index) {}

std::vector<std::uint32_t> epoch_visit_order(const CooccurrenceMatrix& matrix,
                                             std::uint64_t epoch_seed) {
  const auto cells = matrix.cells();
  const std::size_t n = cells.size() * 2;
  if (n > 0xffffffffULL) throw Error("matrix too large for a 32-bit visit order");
  std::vector<std::uint32_t> hash(n);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::uint64_t fwd = (static_cast<std::uint64_t>(cells[c].i) << 32) | cells[c].j;
    const std::uint64_t rev = (static_cast<std::uint64_t>(cells[c].j) << 32) | cells[c].i;
    hash[2 * c] = static_cast<std::uint32_t>(splitmix64(epoch_seed ^ fwd) >> 32);
    hash[2 * c + 1] = static_cast<std::uint32_t>(splitmix64(epoch_seed ^ rev) >> 32);
  }
  // Two stable counting-sort passes on 16-bit digits; ties keep entry order.
  std::vector<std::uint32_t> order(n);
  std::vector<std::uint32_t> tmp(n);
  for (std::size_t e = 0; e < n; ++e) tmp[e] = static_cast<std::uint32_t>(e);
  std::vector<std::size_t> bucket(1 << 16);
  for (int shift : {0, 16}) {
    std::fill(bucket.begin(), bucket.end(), 0);
    for (std::uint32_t e : tmp) ++bucket[(hash[e] >> shift) & 0xffff];
    std::size_t sum = 0;
    for (auto& b : bucket) {
      const std::size_t count = b;
      b = sum;
      sum += count;
    }
    for (std::uint32_t e : tmp) order[bucket[(hash[e] >> shift) & 0xffff]++] = e;
    std::swap(order, tmp);
  }
  return tmp;
}

namespace {

// Plain loads/stores for the single-updater mode.
struct PlainAccess {
  static double load(const double& x) { return x; }
  static void store(double& x, double v) { x = v; }
};

// Relaxed atomic loads/stores for asynchronous updaters: races lose updates
// but never tear values.
struct RelaxedAccess {
  static double load(const double& x) {
    return std::atomic_ref<double>(const_cast<double&>(x)).load(std::memory_order_relaxed);
  }
  static void store(double& x, double v) {
    std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
  }
};

struct TrainingState {
  std::size_t dim;
  double* main;
  double* context;
  double* main_bias;
  double* context_bias;
  double* grad_main;
  double* grad_context;
  double* grad_main_bias;
  double* grad_context_bias;
};

// Cell with its log count and weight, so one visit touches one cache line.
struct PackedCell {
  TokenId i;
  TokenId j;
  double log_x;
  double f_x;
};

struct ChunkResult {
  double cost = 0.0;
  std::size_t clipped = 0;
  bool diverged = false;
  std::size_t diverged_at = 0;
};

void prefetch_rows(const double* p, std::size_t dim) {
  const auto* bytes = reinterpret_cast<const char*>(p);
  for (std::size_t off = 0; off < dim * sizeof(double); off += 64) __builtin_prefetch(bytes + off);
}

template <typename Access>
ChunkResult run_chunk(const TrainingState& s, std::span<const PackedCell> cells,
                      std::span<const std::uint32_t> order, const HyperParams& hp) {
  ChunkResult r;
  const std::size_t dim = s.dim;
  constexpr std::size_t kAhead = 4;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (pos + 2 * kAhead < order.size()) __builtin_prefetch(&cells[order[pos + 2 * kAhead] >> 1]);
    if (pos + kAhead < order.size()) {
      const std::uint32_t ahead = order[pos + kAhead];
      const PackedCell& pc = cells[ahead >> 1];
      const std::size_t pi = (ahead & 1) ? pc.j : pc.i;
      const std::size_t pj = (ahead & 1) ? pc.i : pc.j;
      prefetch_rows(s.main + pi * dim, dim);
      prefetch_rows(s.grad_main + pi * dim, dim);
      prefetch_rows(s.context + pj * dim, dim);
      prefetch_rows(s.grad_context + pj * dim, dim);
    }
    const std::uint32_t e = order[pos];
    const PackedCell& cell = cells[e >> 1];
    const TokenId i = (e & 1) ? cell.j : cell.i;
    const TokenId j = (e & 1) ? cell.i : cell.j;
    double* w = s.main + static_cast<std::size_t>(i) * dim;
    double* c = s.context + static_cast<std::size_t>(j) * dim;
    double* gw = s.grad_main + static_cast<std::size_t>(i) * dim;
    double* gc = s.grad_context + static_cast<std::size_t>(j) * dim;

    double diff = Access::load(s.main_bias[i]) + Access::load(s.context_bias[j]) - cell.log_x;
    for (std::size_t k = 0; k < dim; ++k) diff += Access::load(w[k]) * Access::load(c[k]);
    if (!std::isfinite(diff)) {
      r.diverged = true;
      r.diverged_at = e;
      return r;
    }
    const double fx = cell.f_x;
    r.cost += fx * diff * diff;

    double fdiff = fx * diff;
    if (fdiff > hp.clip) {
      fdiff = hp.clip;
      ++r.clipped;
    } else if (fdiff < -hp.clip) {
      fdiff = -hp.clip;
      ++r.clipped;
    }
    const double g = hp.learning_rate * fdiff;

    for (std::size_t k = 0; k < dim; ++k) {
      const double wk = Access::load(w[k]);
      const double ck = Access::load(c[k]);
      const double t_main = g * ck;
      const double t_context = g * wk;
      const double gwk = Access::load(gw[k]);
      const double gck = Access::load(gc[k]);
      Access::store(w[k], wk - t_main / std::sqrt(gwk));
      Access::store(c[k], ck - t_context / std::sqrt(gck));
      Access::store(gw[k], gwk + t_main * t_main);
      Access::store(gc[k], gck + t_context * t_context);
    }
    const double gb = Access::load(s.grad_main_bias[i]);
    const double gcb = Access::load(s.grad_context_bias[j]);
    Access::store(s.main_bias[i], Access::load(s.main_bias[i]) - g / std::sqrt(gb));
    Access::store(s.context_bias[j], Access::load(s.context_bias[j]) - g / std::sqrt(gcb));
    Access::store(s.grad_main_bias[i], gb + g * g);
    Access::store(s.grad_context_bias[j], gcb + g * g);
  }
  return r;
}

}  // namespace

TrainingResult train(const CooccurrenceMatrix& matrix, const HyperParams& hp,
                     const EpochCallback& on_epoch) {
  if (auto v = hp.violations(); !v.empty()) throw ValidationError(std::move(v));
  if (matrix.empty()) throw Error("cannot train on an empty co-occurrence matrix");

  TrainingResult result{initialize_model(matrix.vocab_size(), hp), {}};
  EmbeddingModel& model = result.model;
  const std::size_t vocab = matrix.vocab_size();
  const std::size_t dim = hp.dim;

  std::vector<double> grad_main(vocab * dim, 1.0);
  std::vector<double> grad_context(vocab * dim, 1.0);
  std::vector<double> grad_main_bias(vocab, 1.0);
  std::vector<double> grad_context_bias(vocab, 1.0);
  const TrainingState state{dim,
                            model.main(0).data(),
                            model.context(0).data(),
                            &model.main_bias(0),
                            &model.context_bias(0),
                            grad_main.data(),
                            grad_context.data(),
                            grad_main_bias.data(),
                            grad_context_bias.data()};

  std::vector<PackedCell> cells;
  cells.reserve(matrix.stored_cells());
  for (const Cell& c : matrix.cells()) {
    cells.push_back({c.i, c.j, std::log(c.weight), weight_fn(c.weight, hp.x_max, hp.alpha)});
  }

  const std::uint64_t shuffle_seed = derive_seed(hp.rng_seed, "shuffle");
  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const auto order = epoch_visit_order(matrix, derive_seed(shuffle_seed, epoch));

    std::vector<ChunkResult> chunks;
    if (hp.threads <= 1) {
      chunks.push_back(run_chunk<PlainAccess>(state, cells, order, hp));
    } else {
      chunks.resize(hp.threads);
      const std::size_t per = (order.size() + hp.threads - 1) / hp.threads;
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < hp.threads; ++t) {
        const std::size_t begin = std::min(order.size(), t * per);
        const std::size_t end = std::min(order.size(), begin + per);
        workers.emplace_back([&, t, begin, end] {
          chunks[t] = run_chunk<RelaxedAccess>(
              state, cells, std::span(order).subspan(begin, end - begin), hp);
        });
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    for (const auto& chunk : chunks) {
      if (chunk.diverged) throw TrainingDiverged(epoch, chunk.diverged_at >> 1);
      stats.cost += chunk.cost;
      stats.clipped += chunk.clipped;
    }
    if (!std::isfinite(stats.cost)) throw TrainingDiverged(epoch, 0);
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (stats.clipped > 0) {
      log_warning("epoch " + std::to_string(epoch) + ": clipped " +
                  std::to_string(stats.clipped) + " update(s) to |f*diff| <= " +
                  format_double(hp.clip));
    }
    result.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  if (!model.all_finite()) throw TrainingDiverged(hp.epochs, 0);
  return result;
}

}  // namespace chvenrich
