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

#include "chvenrich/stemmer.hpp"

#include <array>
#include <utility>

namespace chvenrich {

namespace {

class PorterWord {
 public:
  explicit PorterWord(std::string_view w) : b_(w) {}

  std::string take() { return std::move(b_); }

  void run() {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
  }

 private:
  std::string b_;

  bool is_consonant(std::size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(i - 1);
      default:
        return true;
    }
  }

  // m() over the prefix b_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && is_consonant(i)) ++i;
    while (i < len) {
      while (i < len && !is_consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && is_consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!is_consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && is_consonant(len - 1);
  }

  // cvc where the final c is not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!is_consonant(len - 1) || is_consonant(len - 2) || !is_consonant(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return b_.size() >= suffix.size() &&
           std::string_view(b_).substr(b_.size() - suffix.size()) == suffix;
  }

  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void replace_suffix(std::string_view suffix, std::string_view with) {
    b_.resize(stem_len(suffix));
    b_.append(with);
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  // First matching suffix decides; the rule fires only if the stem measure
  // exceeds min_measure.
  template <std::size_t N>
  void apply_rules(const std::array<Rule, N>& rules, int min_measure) {
    for (const auto& r : rules) {
      if (ends_with(r.suffix)) {
        if (measure(stem_len(r.suffix)) > min_measure) replace_suffix(r.suffix, r.replacement);
        return;
      }
    }
  }

  void step1a() {
    if (ends_with("sses")) {
      replace_suffix("sses", "ss");
    } else if (ends_with("ies")) {
      replace_suffix("ies", "i");
    } else if (ends_with("ss") || ends_with("os")) {
      // unchanged
    } else if ((ends_with("sis") || ends_with("tis")) && measure(stem_len("is")) > 1) {
      replace_suffix("is", "");
    } else if (ends_with("s")) {
      replace_suffix("s", "");
    }
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    std::string_view removed;
    if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      removed = "ed";
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      removed = "ing";
    } else {
      return;
    }
    replace_suffix(removed, "");
    if (ends_with("at")) {
      b_ += 'e';
    } else if (ends_with("bl")) {
      b_ += 'e';
    } else if (ends_with("iz")) {
      b_ += 'e';
    } else if (double_consonant(b_.size())) {
      const char last = b_.back();
      if (last != 'l' && last != 's' && last != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_ += 'e';
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_len("y"))) replace_suffix("y", "i");
  }

  void step2() {
    static constexpr std::array<Rule, 20> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_rules(kRules, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules{{
        {"icate", "ic"},
        {"ative", ""},
        {"alize", "al"},
        {"iciti", "ic"},
        {"ical", "ic"},
        {"ful", ""},
        {"ness", ""},
    }};
    apply_rules(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    for (std::string_view s : kSuffixes) {
      if (!ends_with(s)) continue;
      const std::size_t len = stem_len(s);
      if (measure(len) > 1) {
        if (s == "ion" && !(len > 0 && (b_[len - 1] == 's' || b_[len - 1] == 't'))) return;
        b_.resize(len);
      }
      return;
    }
  }

  void step5() {
    if (ends_with("e")) {
      const std::size_t len = stem_len("e");
      const int m = measure(len);
      if (m > 1 || (m == 1 && !cvc(len))) b_.resize(len);
    }
    if (ends_with("ll") && measure(b_.size()) > 1) b_.pop_back();
  }
};

}  // namespace

std::string porter_stem_pass(std::string_view word) {
  PorterWord w(word);
  w.run();
  return w.take();
}

std::string stem(std::string_view word) {
  std::string current(word);
  // Each pass is length non-increasing and "y"->"i" is one-way, so this
  // terminates quickly; the bound is a backstop.
  for (int pass = 0; pass < 16; ++pass) {
    std::string next = porter_stem_pass(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace chvenrich
