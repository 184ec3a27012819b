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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chvenrich/chv.hpp"
#include "chvenrich/enrich.hpp"
#include "chvenrich/eval.hpp"
#include "chvenrich/preprocess.hpp"
#include "chvenrich/trainer.hpp"

namespace chvenrich {

// Everything a full pipeline run needs. Parsed from a flat key=value file.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path stopwords;      // empty = built-in list
  std::filesystem::path med_stopwords;  // empty = built-in list
  std::filesystem::path concepts;
  std::filesystem::path workdir = "chv-enrich-run";

  std::size_t min_token_length = 3;
  bool stemming = true;
  std::uint64_t min_count = 5;
  std::size_t window = 10;
  HyperParams hp;
  FeedbackConfig feedback;
  EvalConfig eval;
  GroundTruthOptions ground_truth;
  std::size_t eval_runs = 1;
  std::uint64_t rng_seed = 0;
  unsigned threads = 1;

  // Canonical key=value text (every key, fixed order); hashed into the
  // manifest.
  std::string to_text() const;
  CleaningConfig cleaning_config() const;
};

struct ConfigValidation {
  std::optional<RunConfig> config;
  std::vector<std::string> violations;

  bool ok() const { return config.has_value(); }
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

// Parses and checks every key, collecting all violations before returning.
// Overrides are applied after the file, in order.
ConfigValidation parse_config(std::string_view text, const ConfigOverrides& overrides = {});
ConfigValidation validate_config(const std::filesystem::path& path,
                                 const ConfigOverrides& overrides = {});

// Keys accepted by parse_config, in canonical order.
const std::vector<std::string>& config_keys();

}  // namespace chvenrich
