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

#ifndef STAGESURV_PIPELINE_CONFIG_H_
#define STAGESURV_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "stagesurv/cohort/schema.h"
#include "stagesurv/learners/model_config.h"
#include "stagesurv/pipeline/synth.h"
#include "stagesurv/selection/evaluation.h"
#include "stagesurv/selection/grid_search.h"

namespace stagesurv::pipeline {

struct ExplainSettings {
  // Model explained per stage; falls back to the first selected learner
  // when this one is not selected.
  learners::Learner learner = learners::Learner::kSymGbdt;
  size_t background_size = 100;
  size_t kernel_samples = 512;
  size_t summary_instances = 100;
  size_t top_k = 5;
  size_t lime_samples = 5000;
  double kernel_width_factor = 0.75;
  double lime_ridge = 1.0;
  // 0 explains the single lowest-survival case; n > 0 also aggregates the
  // top features over the n lowest cases.
  size_t lime_aggregate_cases = 0;

  nlohmann::json ToJson() const;
};

struct RunConfig {
  uint64_t seed = 0;
  std::optional<std::filesystem::path> input;
  std::optional<SynthSpec> synth;
  std::shared_ptr<const cohort::FeatureSchema> schema;
  int k_folds = selection::kDefaultFolds;
  std::map<learners::Learner, selection::HyperGrid> grids;  // Every learner.
  std::vector<learners::Learner> learners;
  std::vector<cohort::Stage> stages;
  ExplainSettings explain;
  double threshold = selection::kDefaultThreshold;
  int threads = 1;
  bool reuse_prefixes = true;
  std::filesystem::path out = "stagesurv-out";

  // Keys: seed, input, synth, schema (path or inline object), cancer_type,
  // k_folds, grids {tag: grid}, learners, stages, explain {...}, threshold,
  // threads, reuse_prefixes, out. Relative paths resolve against
  // `base_dir`. `seed_override` replaces the seed key; a seed must come
  // from one of the two. Unknown keys throw ConfigError.
  static RunConfig FromJson(const nlohmann::json& json,
                            const std::filesystem::path& base_dir,
                            std::optional<uint64_t> seed_override = {});
  static RunConfig Load(const std::filesystem::path& file,
                        std::optional<uint64_t> seed_override = {});
  // A config without input or synth spec, default everything else.
  static RunConfig Defaults(uint64_t seed);

  // Effective settings, every default spelled out.
  nlohmann::json ToJson() const;

  selection::StagewiseOptions Stagewise() const;
  learners::Learner ExplainLearner() const;
};

// "all" or a stage slug / learner tag.
std::vector<cohort::Stage> ParseStageSelection(std::string_view text);
std::vector<learners::Learner> ParseLearnerSelection(std::string_view text);

}  // namespace stagesurv::pipeline

#endif  // STAGESURV_PIPELINE_CONFIG_H_
