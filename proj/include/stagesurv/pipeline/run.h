/*
 * Copyright 2026 The Stagesurv Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STAGESURV_PIPELINE_RUN_H_
#define STAGESURV_PIPELINE_RUN_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stagesurv/cohort/schema.h"
#include "stagesurv/pipeline/config.h"

namespace stagesurv::pipeline {

// Pipeline steps; a subcommand runs a subset.
enum Step : unsigned {
  kStepIngest = 1,    // cleaning_report, stage_split, correlation
  kStepTrain = 2,     // grid_search, best_models
  kStepEvaluate = 4,  // metrics, ROC curves, metrics table
  kStepExplain = 8,   // SHAP summary, LIME case, presence matrices
  kStepReport = 16,   // survivor comparison tables
  kStepAll = 31,
};

inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kManifestFormat = "stagesurv-manifest";

enum class StageStatus { kOk, kSkipped, kFailed };
std::string_view StageStatusName(StageStatus status);

struct StageOutcome {
  cohort::Stage stage = cohort::Stage::kLocalized;
  StageStatus status = StageStatus::kOk;
  std::string message;
  size_t rows = 0;
  size_t survivors = 0;
  std::vector<std::string> files;  // Relative to the run directory.
};

struct RunResult {
  std::filesystem::path out;
  std::vector<StageOutcome> stages;  // Selected stages, in order.
  std::map<std::string, std::string> hashes;  // Relative path -> SHA-256.

  // Some selected stage was skipped or failed.
  bool partial() const;
};

// Hex SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

// Reads the cohort named by the config, or generates it from the synth spec
// and stores it as cohort.csv (plus synth_truth.tsv) in the run directory,
// then runs `steps` for every selected stage. Stage data problems and fit
// failures are recorded in the outcome and the manifest; later stages still
// run. Config, schema and input problems throw.
RunResult RunPipeline(const RunConfig& config, unsigned steps,
                      std::string_view command = "run");

// Writes cohort.csv and synth_truth.tsv for the config's synth spec (the
// planted default when the config has none) and a manifest.
RunResult WriteSynthCohort(const RunConfig& config);

}  // namespace stagesurv::pipeline

#endif  // STAGESURV_PIPELINE_RUN_H_
