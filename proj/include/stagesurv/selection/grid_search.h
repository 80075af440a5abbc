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

#ifndef STAGESURV_SELECTION_GRID_SEARCH_H_
#define STAGESURV_SELECTION_GRID_SEARCH_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stagesurv/cohort/table.h"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/model_config.h"
#include "stagesurv/selection/folds.h"
#include "stagesurv/selection/metrics.h"

namespace stagesurv::selection {

struct HyperAxis {
  std::string name;
  std::vector<learners::ParamValue> values;
};

// Cartesian product of named axes, expanded with the first axis outermost.
class HyperGrid {
 public:
  // Throws ConfigError on an empty or duplicated axis.
  HyperGrid(learners::Learner learner, std::vector<HyperAxis> axes);

  // Default search space of each learner.
  static HyperGrid Default(learners::Learner learner);
  // Either {"axis": [values], ...} (axes in key order) or
  // [{"name": "axis", "values": [...]}, ...] (axes in listed order).
  static HyperGrid FromJson(learners::Learner learner, const nlohmann::json& json);
  nlohmann::json ToJson() const;

  learners::Learner learner() const { return learner_; }
  const std::vector<HyperAxis>& axes() const { return axes_; }
  size_t size() const;
  std::vector<learners::ModelConfig> Expand(uint64_t seed) const;

 private:
  learners::Learner learner_;
  std::vector<HyperAxis> axes_;
};

struct ConfigResult {
  learners::ModelConfig config;
  std::vector<MetricsRow> folds;
  MetricsRow mean;
  bool failed = false;
  std::string error;
};

struct GridResult {
  learners::Learner learner = learners::Learner::kLogisticRegression;
  int k = 0;
  std::vector<ConfigResult> configs;  // Grid order.
  size_t best_index = 0;
  // Held-out ROC curve of the selected config on each fold.
  std::vector<RocCurve> best_fold_curves;

  const ConfigResult& best() const { return configs[best_index]; }
};

struct GridSearchOptions {
  uint64_t seed = 0;  // Passed to every fit.
  int threads = 1;
  double threshold = kDefaultThreshold;
  // Configs differing only in ensemble size share one fit of the largest
  // size, truncated; results are identical to separate fits.
  bool reuse_prefixes = true;
};

// Mean and population std of the given columns over `rows`, a zero std
// replaced by 1.
struct ColumnScaling {
  std::vector<size_t> columns;
  std::vector<double> mean;
  std::vector<double> std;

  static ColumnScaling Fit(const Matrix& x, std::span<const size_t> rows,
                           std::vector<size_t> columns);
  void Apply(Matrix* x) const;
};

// For every config: fits on k-1 folds, scores the held-out fold, averages
// the fold metrics. Columns in `scaled_columns` are re-standardized with
// training-fold statistics before each fit. A config whose fit throws is
// marked failed and left out of the ranking; the best config has the highest
// mean AUC, the earliest in grid order on ties. Throws FitError when every
// config fails. Output does not depend on options.threads.
GridResult GridSearch(const Matrix& x, std::span<const int> labels,
                      std::span<const size_t> scaled_columns,
                      const HyperGrid& grid, const FoldPlan& plan,
                      const GridSearchOptions& options);

// Scales the table's numeric columns per fold.
GridResult GridSearch(const cohort::CohortTable& table, const HyperGrid& grid,
                      const FoldPlan& plan, const GridSearchOptions& options);

// One row per config of every result: learner, index, params, status, mean
// metrics, per-fold AUCs, selection mark and error text.
std::string GridResultsCsv(std::span<const GridResult> results);

}  // namespace stagesurv::selection

#endif  // STAGESURV_SELECTION_GRID_SEARCH_H_
