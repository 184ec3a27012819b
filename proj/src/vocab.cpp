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

#include "chvenrich/vocab.hpp"

#include <algorithm>
#include <fstream>

namespace chvenrich {

Vocabulary::Vocabulary(std::vector<VocabEntry> entries, std::uint64_t min_count)
    : entries_(std::move(entries)), min_count_(min_count) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].token, static_cast<TokenId>(i)).second) {
      throw Error("duplicate vocabulary token '" + entries_[i].token + "'");
    }
  }
}

std::optional<TokenId> Vocabulary::lookup(std::string_view token) const {
  // TODO: switch to heterogeneous lookup once the toolchain baseline is GCC 12.
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::total_count() const {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.count;
  return total;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "#vocab v1 size=" << entries_.size() << " min_count=" << min_count_ << '\n';
  for (const auto& e : entries_) out << e.token << '\t' << e.count << '\n';
  if (!out) throw Error("write failure on " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocabulary " + path.string());
  std::vector<VocabEntry> entries;
  std::uint64_t min_count = 1;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (const auto pos = line.find("min_count="); pos != std::string::npos) {
        auto rest = std::string_view(line).substr(pos + 10);
        min_count = parse_u64(rest.substr(0, rest.find(' ')), "min_count");
      }
      continue;
    }
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected token<TAB>count");
    }
    entries.push_back({std::string(fields[0]), parse_u64(fields[1], "count")});
  }
  return Vocabulary(std::move(entries), min_count);
}

void VocabCounter::add(const Document& doc) {
  for (const auto& t : doc.tokens) ++counts_[t];
}

void VocabCounter::merge(const VocabCounter& other) {
  for (const auto& [token, count] : other.counts_) counts_[token] += count;
}

Vocabulary VocabCounter::build(std::uint64_t min_count) const {
  if (min_count < 1) throw ValidationError({"min_count >= 1"});
  std::vector<VocabEntry> entries;
  for (const auto& [token, count] : counts_) {
    if (count >= min_count) entries.push_back({token, count});
  }
  if (entries.empty()) throw Error("no tokens survive min_count");
  std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.token < b.token;
  });
  return Vocabulary(std::move(entries), min_count);
}

Vocabulary build_vocabulary(std::span<const Document> documents, std::uint64_t min_count) {
  VocabCounter counter;
  for (const auto& doc : documents) counter.add(doc);
  return counter.build(min_count);
}

}  // namespace chvenrich
