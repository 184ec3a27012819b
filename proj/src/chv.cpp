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

#include "chvenrich/chv.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "chvenrich/common.hpp"

namespace chvenrich {

namespace {

bool valid_cui(std::string_view cui) {
  return cui.size() >= 2 && cui.front() == 'C' &&
         std::all_of(cui.begin() + 1, cui.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string variant_form(std::string_view word) {
  std::string n = normalize_word(word);
  if (!n.empty() && n.back() == 's') n.pop_back();
  return n;
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line_no, const std::string& what) {
  throw Error(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<Concept> parse_concepts(std::istream& in, const TokenCleaner& cleaner,
                                    std::string_view source) {
  std::vector<Concept> concepts;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      fail_at(source, line_no, "expected CUI<TAB>professional_name<TAB>terms, got " +
                                   std::to_string(fields.size()) + " field(s)");
    }
    Concept c;
    c.cui = std::string(trim(fields[0]));
    if (!valid_cui(c.cui)) fail_at(source, line_no, "malformed CUI '" + c.cui + "'");
    if (!seen.insert(c.cui).second) fail_at(source, line_no, "duplicate CUI " + c.cui);
    c.professional_name = std::string(trim(fields[1]));
    for (auto term : split(fields[2], '|')) {
      for (auto word : split(trim(term), ' ')) {
        if (word.empty()) continue;
        auto cleaned = cleaner.clean(word);
        if (!cleaned) continue;
        if (std::find(c.chv_terms.begin(), c.chv_terms.end(), *cleaned) != c.chv_terms.end()) {
          continue;
        }
        c.chv_terms.push_back(std::move(*cleaned));
        c.source_terms.emplace_back(word);
      }
    }
    concepts.push_back(std::move(c));
  }
  return concepts;
}

std::vector<Concept> load_concepts(const std::filesystem::path& path,
                                   const TokenCleaner& cleaner) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open concepts file " + path.string());
  return parse_concepts(in, cleaner, path.string());
}

bool is_morphological_variant(std::string_view chv_term, std::string_view professional_name) {
  const std::string term = variant_form(chv_term);
  if (term.empty()) return false;
  for (auto word : split(professional_name, ' ')) {
    if (!word.empty() && variant_form(word) == term) return true;
  }
  return false;
}

std::vector<std::string> GroundTruthOptions::violations() const {
  std::vector<std::string> out;
  if (min_term_count < 1) out.emplace_back("min_term_count >= 1");
  if (min_terms < 2) out.emplace_back("min_terms >= 2");
  return out;
}

std::vector<Concept> filter_ground_truth(std::span<const Concept> concepts,
                                         const Vocabulary& vocab,
                                         const GroundTruthOptions& options) {
  if (auto v = options.violations(); !v.empty()) throw ValidationError(std::move(v));
  std::vector<Concept> kept;
  for (const auto& c : concepts) {
    Concept out{c.cui, c.professional_name, {}, {}};
    for (std::size_t k = 0; k < c.chv_terms.size(); ++k) {
      const auto& term = c.chv_terms[k];
      const auto& source = k < c.source_terms.size() ? c.source_terms[k] : term;
      if (is_morphological_variant(term, c.professional_name) ||
          is_morphological_variant(source, c.professional_name)) {
        continue;
      }
      const auto id = vocab.lookup(term);
      if (!id || vocab.count_at(*id) < options.min_term_count) continue;
      out.chv_terms.push_back(term);
      out.source_terms.push_back(source);
    }
    if (out.chv_terms.size() >= options.min_terms) kept.push_back(std::move(out));
  }
  if (kept.empty()) throw Error("no evaluable concepts");
  return kept;
}

std::vector<SeedAssignment> assign_seeds(std::span<const Concept> concepts,
                                         std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  std::vector<SeedAssignment> out;
  out.reserve(concepts.size());
  for (const auto& c : concepts) {
    if (c.chv_terms.size() < 2) {
      throw Error("concept " + c.cui + " needs at least two terms to pick a seed");
    }
    const auto pick = rng.uniform_index(c.chv_terms.size());
    SeedAssignment a{c.cui, c.chv_terms[pick], {}};
    for (std::size_t k = 0; k < c.chv_terms.size(); ++k) {
      if (k != pick) a.targets.push_back(c.chv_terms[k]);
    }
    out.push_back(std::move(a));
  }
  return out;
}

void save_seeds(std::span<const SeedAssignment> seeds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "#seeds v1 concepts=" << seeds.size() << '\n';
  for (const auto& s : seeds) {
    out << s.cui << '\t' << s.seed << '\t';
    for (std::size_t k = 0; k < s.targets.size(); ++k) out << (k ? "|" : "") << s.targets[k];
    out << '\n';
  }
  if (!out) throw Error("write failure on " + path.string());
}

std::vector<SeedAssignment> load_seeds(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open seeds file " + path.string());
  std::vector<SeedAssignment> seeds;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3 || fields[1].empty()) {
      fail_at(path.string(), line_no, "expected CUI<TAB>seed<TAB>targets");
    }
    SeedAssignment s{std::string(fields[0]), std::string(fields[1]), {}};
    for (auto t : split(fields[2], '|')) {
      if (!t.empty()) s.targets.emplace_back(t);
    }
    if (s.targets.empty()) fail_at(path.string(), line_no, "seed without targets");
    seeds.push_back(std::move(s));
  }
  return seeds;
}

}  // namespace chvenrich
