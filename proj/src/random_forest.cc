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

#include "stagesurv/learners/random_forest.h"

#include <algorithm>
#include <cmath>

#include "stagesurv/common/errors.h"
#include "stagesurv/common/parallel.h"
#include "stagesurv/common/random.h"

namespace stagesurv::learners {

double ForestModel::PredictProba(std::span<const double> row) const {
  if (trees.empty()) return 0.5;
  double sum = 0;
  for (const DecisionTree& tree : trees) sum += tree.PredictProba(row);
  return sum / static_cast<double>(trees.size());
}

nlohmann::json ForestModel::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const DecisionTree& tree : trees) out.push_back(tree.ToJson());
  return {{"trees", std::move(out)}};
}

ForestModel ForestModel::FromJson(const nlohmann::json& json) {
  ForestModel model;
  for (const auto& tree : json.at("trees")) {
    model.trees.push_back(DecisionTree::FromJson(tree));
  }
  return model;
}

ForestModel FitRandomForest(const Matrix& x, std::span<const int> labels,
                            std::span<const double> sample_weights,
                            const RandomForestParams& params, uint64_t seed,
                            int threads) {
  const size_t n = x.rows();
  if (n == 0) throw FitError("random forest needs at least one sample");
  if (labels.size() != n) throw DimensionError("labels and rows differ");
  if (params.n_estimators < 1) throw ConfigError("n_estimators must be >= 1");

  const BinnedFeatures data(x);
  double positives = 0;
  for (const int y : labels) positives += y == 1 ? 1 : 0;
  const bool both_classes = positives > 0 && positives < static_cast<double>(n);
  const bool subsample =
      params.class_weight.mode == ClassWeightMode::kBalancedSubsample;
  // Weights are irrelevant when only one class is present.
  const ClassWeights global =
      both_classes ? ComputeClassWeights(labels, params.class_weight)
                   : ClassWeights{};
  const std::vector<double> unit_weights =
      CombineWeights(labels, ClassWeights{}, sample_weights);

  TreeGrowthParams growth;
  growth.max_depth = params.max_depth;
  growth.min_samples_split = params.min_samples_split;
  growth.min_samples_leaf = params.min_samples_leaf;
  growth.max_features = std::max(
      1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));

  ForestModel model;
  model.trees.resize(params.n_estimators);
  ParallelFor(params.n_estimators, threads, [&](size_t t) {
    Rng rng = MakeRng(seed, kStreamForest + t);
    std::vector<uint32_t> counts(n, 0);
    std::uniform_int_distribution<size_t> draw(0, n - 1);
    for (size_t k = 0; k < n; ++k) ++counts[draw(rng)];

    ClassWeights class_weights = global;
    if (subsample && both_classes) {
      double c0 = 0, c1 = 0;
      for (size_t i = 0; i < n; ++i) {
        (labels[i] == 1 ? c1 : c0) += counts[i] * unit_weights[i];
      }
      class_weights = (c0 > 0 && c1 > 0) ? BalancedWeights(c0, c1)
                                         : ClassWeights{};
    }
    std::vector<double> weights(n);
    for (size_t i = 0; i < n; ++i) {
      weights[i] = class_weights[labels[i]] * unit_weights[i] * counts[i];
    }
    model.trees[t] =
        GrowClassificationTree(data, labels, weights, counts, growth, &rng);
  });
  return model;
}

}  // namespace stagesurv::learners
