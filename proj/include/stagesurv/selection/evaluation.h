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

#ifndef STAGESURV_SELECTION_EVALUATION_H_
#define STAGESURV_SELECTION_EVALUATION_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stagesurv/cohort/schema.h"
#include "stagesurv/cohort/table.h"
#include "stagesurv/learners/model_config.h"
#include "stagesurv/selection/grid_search.h"

namespace stagesurv::selection {

struct StagewiseOptions {
  int k = kDefaultFolds;
  GridSearchOptions search;
  // Grid per learner; learners missing here use HyperGrid::Default.
  std::map<learners::Learner, HyperGrid> grids;

  HyperGrid GridFor(learners::Learner learner) const;
};

struct StageEvaluation {
  cohort::Stage stage = cohort::Stage::kLocalized;
  bool skipped = false;
  std::string skip_reason;
  FoldPlan plan;
  std::vector<GridResult> results;  // One per requested learner, in order.
};

// Grid-searches every learner on one stage cohort with a shared fold plan
// seeded from (options.search.seed, stage). A cohort too small for k folds
// comes back skipped instead of throwing.
StageEvaluation EvaluateStage(const cohort::CohortTable& table,
                              cohort::Stage stage,
                              std::span<const learners::Learner> learners,
                              const StagewiseOptions& options);

// Runs EvaluateStage for each available stage cohort; a null entry is
// reported as skipped.
std::vector<StageEvaluation> EvaluateStagewise(
    const std::array<const cohort::CohortTable*, 3>& stages,
    std::span<const learners::Learner> learners,
    const StagewiseOptions& options);

// Stages x learners x {Acc, Prec, Rec, F1, AUC}; cells hold CV means of the
// selected config.
struct MetricsTable {
  struct Row {
    cohort::Stage stage;
    std::optional<std::string> skipped;  // Reason, when the stage was skipped.
    std::vector<std::optional<MetricsRow>> cells;  // Aligned with learners.
  };
  std::vector<learners::Learner> learners;
  std::vector<Row> rows;
  int k = kDefaultFolds;

  // stage,learner,acc,prec,rec,f1,auc,status
  std::string ToCsv() const;
  // Stages as rows, one column group per learner.
  std::string ToText() const;
};

inline constexpr std::string_view kMetricsTableTitle =
    "Performance of ML models for survival prediction";

MetricsTable BuildMetricsTable(std::span<const StageEvaluation> stages,
                               std::span<const learners::Learner> learners);

}  // namespace stagesurv::selection

#endif  // STAGESURV_SELECTION_EVALUATION_H_
