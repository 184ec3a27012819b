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

#include "chvenrich/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "chvenrich/cooccur.hpp"

namespace chvenrich {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> kKeys{
      "corpus",   "stopwords",     "med_stopwords", "concepts",       "workdir",
      "min_len",  "stem",          "min_count",     "window",         "dim",
      "x_max",    "alpha",         "learning_rate", "epochs",         "clip",
      "vectors",  "top_n",         "top_k",         "rounds",         "boost",
      "boost_pairs", "denominator", "min_term_count", "min_terms",    "eval_runs",
      "rng_seed", "threads"};
  return kKeys;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "corpus = " << corpus.string() << '\n'
      << "stopwords = " << stopwords.string() << '\n'
      << "med_stopwords = " << med_stopwords.string() << '\n'
      << "concepts = " << concepts.string() << '\n'
      << "workdir = " << workdir.string() << '\n'
      << "min_len = " << min_token_length << '\n'
      << "stem = " << (stemming ? "true" : "false") << '\n'
      << "min_count = " << min_count << '\n'
      << "window = " << window << '\n'
      << "dim = " << hp.dim << '\n'
      << "x_max = " << format_double(hp.x_max) << '\n'
      << "alpha = " << format_double(hp.alpha) << '\n'
      << "learning_rate = " << format_double(hp.learning_rate) << '\n'
      << "epochs = " << hp.epochs << '\n'
      << "clip = " << format_double(hp.clip) << '\n'
      << "vectors = " << (hp.vectors == VectorMode::Sum ? "sum" : "main") << '\n'
      << "top_n = " << feedback.top_n << '\n'
      << "top_k = " << feedback.top_k << '\n'
      << "rounds = " << feedback.rounds << '\n'
      << "boost = " << feedback.boost.to_string() << '\n'
      << "boost_pairs = "
      << (feedback.pairs == BoostPairs::SeedCandidate ? "seed-candidate" : "all") << '\n'
      << "denominator = " << to_string(eval.denominator) << '\n'
      << "min_term_count = " << ground_truth.min_term_count << '\n'
      << "min_terms = " << ground_truth.min_terms << '\n'
      << "eval_runs = " << eval_runs << '\n'
      << "rng_seed = " << rng_seed << '\n'
      << "threads = " << threads << '\n';
  return out.str();
}

CleaningConfig RunConfig::cleaning_config() const {
  CleaningConfig c = default_cleaning_config();
  c.min_token_length = min_token_length;
  c.stemming_enabled = stemming;
  if (!stopwords.empty()) c.standard_stopwords = load_stopwords(stopwords);
  if (!med_stopwords.empty()) c.medical_stopwords = load_stopwords(med_stopwords);
  return c;
}

namespace {

class Parser {
 public:
  std::vector<std::string> violations;

  std::optional<long long> integer(const std::string& key, std::string_view text) {
    long long v = 0;
    text = trim(text);
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
      violations.push_back(key + ": expected an integer, got '" + std::string(text) + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> real(const std::string& key, std::string_view text) {
    try {
      return parse_double(text, key);
    } catch (const Error&) {
      violations.push_back(key + ": expected a number, got '" + std::string(trim(text)) + "'");
      return std::nullopt;
    }
  }

  // Integer with an inclusive lower bound; the message reads "key >= min".
  template <typename T>
  void at_least(const std::string& key, std::string_view text, long long min, T& out) {
    if (auto v = integer(key, text)) {
      if (*v < min) {
        violations.push_back(key + " >= " + std::to_string(min));
      } else {
        out = static_cast<T>(*v);
      }
    }
  }
};

bool parse_bool(std::string_view text, bool& out) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    out = true;
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    out = false;
    return true;
  }
  return false;
}

}  // namespace

ConfigValidation parse_config(std::string_view text, const ConfigOverrides& overrides) {
  Parser p;
  std::map<std::string, std::string> values;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      p.violations.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    values[std::string(trim(body.substr(0, eq)))] = std::string(trim(body.substr(eq + 1)));
  }
  for (const auto& [k, v] : overrides) values[k] = v;

  const auto& keys = config_keys();
  RunConfig c;
  for (const auto& [key, value] : values) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      p.violations.push_back("unknown key '" + key + "'");
      continue;
    }
    if (key == "corpus") {
      c.corpus = value;
    } else if (key == "stopwords") {
      c.stopwords = value;
    } else if (key == "med_stopwords") {
      c.med_stopwords = value;
    } else if (key == "concepts") {
      c.concepts = value;
    } else if (key == "workdir") {
      c.workdir = value;
    } else if (key == "min_len") {
      p.at_least("min_len", value, 1, c.min_token_length);
    } else if (key == "stem") {
      if (!parse_bool(value, c.stemming)) p.violations.push_back("stem: expected true or false");
    } else if (key == "min_count") {
      p.at_least("min_count", value, 1, c.min_count);
    } else if (key == "window") {
      std::size_t w = 0;
      p.at_least("window", value, 1, w);
      if (w > kMaxWindowSize) {
        p.violations.push_back("window <= " + std::to_string(kMaxWindowSize));
      } else if (w > 0) {
        c.window = w;
      }
    } else if (key == "dim") {
      p.at_least("dim", value, 1, c.hp.dim);
    } else if (key == "epochs") {
      p.at_least("epochs", value, 1, c.hp.epochs);
    } else if (key == "x_max") {
      if (auto v = p.real(key, value)) {
        if (*v > 0.0) c.hp.x_max = *v;
        else p.violations.emplace_back("x_max > 0");
      }
    } else if (key == "alpha") {
      if (auto v = p.real(key, value)) {
        if (*v > 0.0 && *v <= 1.0) c.hp.alpha = *v;
        else p.violations.emplace_back("0 < alpha <= 1");
      }
    } else if (key == "learning_rate") {
      if (auto v = p.real(key, value)) {
        if (*v > 0.0) c.hp.learning_rate = *v;
        else p.violations.emplace_back("learning_rate > 0");
      }
    } else if (key == "clip") {
      if (auto v = p.real(key, value)) {
        if (*v > 0.0) c.hp.clip = *v;
        else p.violations.emplace_back("clip > 0");
      }
    } else if (key == "vectors") {
      if (value == "sum") c.hp.vectors = VectorMode::Sum;
      else if (value == "main") c.hp.vectors = VectorMode::Main;
      else p.violations.emplace_back("vectors: expected sum or main");
    } else if (key == "top_n") {
      p.at_least("top_n", value, 1, c.feedback.top_n);
      c.eval.top_n = c.feedback.top_n;
    } else if (key == "top_k") {
      p.at_least("top_k", value, 0, c.feedback.top_k);
    } else if (key == "rounds") {
      p.at_least("rounds", value, 1, c.feedback.rounds);
    } else if (key == "boost") {
      try {
        c.feedback.boost = BoostPolicy::parse(value);
        for (auto& v : c.feedback.boost.violations()) p.violations.push_back(std::move(v));
      } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) p.violations.push_back(v);
      }
    } else if (key == "boost_pairs") {
      if (value == "seed-candidate") c.feedback.pairs = BoostPairs::SeedCandidate;
      else if (value == "all") c.feedback.pairs = BoostPairs::AllPairs;
      else p.violations.emplace_back("boost_pairs: expected seed-candidate or all");
    } else if (key == "denominator") {
      try {
        c.eval.denominator = parse_denominator_mode(value);
      } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) p.violations.push_back(v);
      }
    } else if (key == "min_term_count") {
      p.at_least("min_term_count", value, 1, c.ground_truth.min_term_count);
    } else if (key == "min_terms") {
      p.at_least("min_terms", value, 2, c.ground_truth.min_terms);
    } else if (key == "eval_runs") {
      p.at_least("eval_runs", value, 1, c.eval_runs);
    } else if (key == "rng_seed") {
      p.at_least("rng_seed", value, 0, c.rng_seed);
    } else if (key == "threads") {
      p.at_least("threads", value, 1, c.threads);
    }
  }
  if (c.corpus.empty()) p.violations.emplace_back("corpus path is required");
  c.hp.threads = c.threads;

  ConfigValidation result;
  result.violations = std::move(p.violations);
  if (result.violations.empty()) result.config = std::move(c);
  return result;
}

ConfigValidation validate_config(const std::filesystem::path& path,
                                 const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {std::nullopt, {"cannot open config file " + path.string()}};
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace chvenrich
