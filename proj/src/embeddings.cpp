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

#include "chvenrich/embeddings.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace chvenrich {

WordVectors to_word_vectors(const EmbeddingModel& model, const Vocabulary& vocab,
                            VectorMode mode) {
  if (model.vocab_size() != vocab.size()) {
    throw Error("model covers " + std::to_string(model.vocab_size()) +
                " tokens but the vocabulary has " + std::to_string(vocab.size()));
  }
  WordVectors out;
  out.dim = model.dim();
  out.tokens.reserve(vocab.size());
  out.values.reserve(vocab.size() * model.dim());
  for (TokenId i = 0; i < vocab.size(); ++i) {
    out.tokens.push_back(vocab.token_at(i));
    const auto v = model.final_vector(i, mode);
    out.values.insert(out.values.end(), v.begin(), v.end());
  }
  return out;
}

void save_word_vectors(const WordVectors& vectors, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << vectors.size() << ' ' << vectors.dim << '\n';
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out << vectors.tokens[i];
    for (double v : vectors.row(i)) out << ' ' << format_double(v);
    out << '\n';
  }
  if (!out) throw Error("write failure on " + path.string());
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embeddings " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty embedding file");
  WordVectors out;
  std::size_t count = 0;
  {
    std::istringstream header(line);
    if (!(header >> count >> out.dim) || out.dim == 0) {
      throw Error(path.string() + ":1: expected '<vocab_size> <dim>' header");
    }
  }
  out.tokens.reserve(count);
  out.values.reserve(count * out.dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    for (auto f : split(line, ' ')) {
      if (!f.empty()) fields.push_back(f);
    }
    if (fields.size() != out.dim + 1) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected token and " +
                  std::to_string(out.dim) + " values");
    }
    out.tokens.emplace_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      out.values.push_back(parse_double(fields[k], "vector component"));
    }
  }
  if (out.tokens.size() != count) {
    throw Error(path.string() + ": header promises " + std::to_string(count) +
                " vectors, found " + std::to_string(out.tokens.size()));
  }
  return out;
}

void save_training_log(std::span<const EpochStats> epochs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& e : epochs) {
    nlohmann::json j{{"epoch", e.epoch}, {"J", e.cost}, {"seconds", e.seconds}};
    if (e.clipped > 0) j["clipped"] = e.clipped;
    out << j.dump() << '\n';
  }
}

}  // namespace chvenrich
