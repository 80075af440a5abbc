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

#ifndef STAGESURV_LEARNERS_RANDOM_FOREST_H_
#define STAGESURV_LEARNERS_RANDOM_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/class_weights.h"
#include "stagesurv/learners/decision_tree.h"

namespace stagesurv::learners {

struct RandomForestParams {
  int n_estimators = 100;
  int max_depth = 5;
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  ClassWeightSpec class_weight{ClassWeightMode::kBalanced};
};

struct ForestModel {
  std::vector<DecisionTree> trees;

  // Mean of the trees' leaf positive-class frequencies.
  double PredictProba(std::span<const double> row) const;

  nlohmann::json ToJson() const;
  static ForestModel FromJson(const nlohmann::json& json);
  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Bootstrap-aggregated Gini trees with floor(sqrt(d)) candidate features per
// node. Tree t draws from the stream DeriveSeed(seed, kStreamForest + t), so
// the first k trees of a larger forest equal a k-tree forest and the result
// does not depend on `threads`.
ForestModel FitRandomForest(const Matrix& x, std::span<const int> labels,
                            std::span<const double> sample_weights,
                            const RandomForestParams& params, uint64_t seed,
                            int threads = 1);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_RANDOM_FOREST_H_
