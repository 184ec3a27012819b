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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chvenrich/common.hpp"
#include "chvenrich/config.hpp"
#include "chvenrich/eval.hpp"

namespace chvenrich {

// A failure inside one pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error("stage " + stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ArtifactRecord {
  std::string name;
  std::filesystem::path path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineResult {
  std::vector<ArtifactRecord> artifacts;
  std::vector<ArtifactRecord> logs;
  std::vector<StageTiming> timings;
  std::optional<Comparison> comparison;
  std::filesystem::path manifest;
};

// Stage names in execution order.
const std::vector<std::string>& pipeline_stages();

// Runs every stage into config.workdir and writes manifest.json there. On a
// stage failure the manifest is still written (status "failed" plus the
// stage name) and StageError is thrown.
PipelineResult run_pipeline(const RunConfig& config);

// Names of the numeric artifacts a run produces, in manifest order.
const std::vector<std::string>& pipeline_artifacts();

}  // namespace chvenrich
