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

#ifndef STAGESURV_LEARNERS_ADABOOST_H_
#define STAGESURV_LEARNERS_ADABOOST_H_

#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/decision_tree.h"

namespace stagesurv::learners {

enum class BoostAlgorithm { kSamme, kSammeR };

std::string_view BoostAlgorithmName(BoostAlgorithm algorithm);
BoostAlgorithm ParseBoostAlgorithm(std::string_view text);

struct AdaBoostParams {
  int n_estimators = 50;
  double learning_rate = 1.0;
  BoostAlgorithm algorithm = BoostAlgorithm::kSamme;
};

struct AdaBoostStage {
  DecisionTree stump;
  // SAMME: the stage weight alpha. SAMME.R: unused (1).
  double weight = 1.0;
  // Weighted training error of the stump when it was fitted.
  double error = 0.0;

  friend bool operator==(const AdaBoostStage&, const AdaBoostStage&) = default;
};

// Stump ensemble. SAMME margin: sum of alpha * (+1 | -1) votes, probability
// logistic(margin). SAMME.R margin: sum of learning_rate * 1/2 log(p1 / p0)
// over the stumps' leaf probabilities, probability logistic(2 * margin).
struct AdaBoostModel {
  BoostAlgorithm algorithm = BoostAlgorithm::kSamme;
  double learning_rate = 1.0;
  std::vector<AdaBoostStage> stages;

  double Margin(std::span<const double> row) const;
  double PredictProba(std::span<const double> row) const;

  nlohmann::json ToJson() const;
  static AdaBoostModel FromJson(const nlohmann::json& json);
  friend bool operator==(const AdaBoostModel&, const AdaBoostModel&) = default;
};

// Leaf probabilities are clipped to [kStumpProbabilityClip, 1 - clip] for
// SAMME.R outputs, and the error used in alpha is floored at kMinStumpError.
inline constexpr double kStumpProbabilityClip = 1e-12;
inline constexpr double kMinStumpError = 1e-10;

// Boosts depth-1 Gini stumps (K = 2). A round whose weighted error reaches 0.5
// is discarded and ends boosting; a round with zero error is kept and ends
// boosting.
AdaBoostModel FitAdaBoost(const Matrix& x, std::span<const int> labels,
                          std::span<const double> sample_weights,
                          const AdaBoostParams& params);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_ADABOOST_H_
