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

#include "stagesurv/learners/adaboost.h"

#include <algorithm>
#include <cmath>

#include "fmt/format.h"
#include "stagesurv/common/errors.h"
#include "stagesurv/learners/class_weights.h"
#include "stagesurv/learners/logistic.h"

namespace stagesurv::learners {
namespace {

double ClippedProba(double p) {
  return std::clamp(p, kStumpProbabilityClip, 1.0 - kStumpProbabilityClip);
}

// Real-valued SAMME.R stage output for K = 2.
double HalfLogOdds(const DecisionTree& stump, std::span<const double> row) {
  const double p = ClippedProba(stump.PredictProba(row));
  return 0.5 * std::log(p / (1.0 - p));
}

int Vote(const DecisionTree& stump, std::span<const double> row) {
  return stump.PredictProba(row) > 0.5 ? 1 : 0;
}

}  // namespace

std::string_view BoostAlgorithmName(BoostAlgorithm algorithm) {
  return algorithm == BoostAlgorithm::kSamme ? "SAMME" : "SAMME.R";
}

BoostAlgorithm ParseBoostAlgorithm(std::string_view text) {
  if (text == "SAMME") return BoostAlgorithm::kSamme;
  if (text == "SAMME.R") return BoostAlgorithm::kSammeR;
  throw ConfigError(fmt::format("unknown AdaBoost algorithm \"{}\"", text));
}

double AdaBoostModel::Margin(std::span<const double> row) const {
  double margin = 0;
  for (const AdaBoostStage& stage : stages) {
    if (algorithm == BoostAlgorithm::kSamme) {
      margin += stage.weight * (Vote(stage.stump, row) == 1 ? 1.0 : -1.0);
    } else {
      margin += learning_rate * HalfLogOdds(stage.stump, row);
    }
  }
  return margin;
}

double AdaBoostModel::PredictProba(std::span<const double> row) const {
  const double margin = Margin(row);
  return Sigmoid(algorithm == BoostAlgorithm::kSamme ? margin : 2.0 * margin);
}

nlohmann::json AdaBoostModel::ToJson() const {
  nlohmann::json stage_json = nlohmann::json::array();
  for (const AdaBoostStage& stage : stages) {
    stage_json.push_back({{"stump", stage.stump.ToJson()},
                          {"weight", stage.weight},
                          {"error", stage.error}});
  }
  return {{"algorithm", BoostAlgorithmName(algorithm)},
          {"learning_rate", learning_rate},
          {"stages", std::move(stage_json)}};
}

AdaBoostModel AdaBoostModel::FromJson(const nlohmann::json& json) {
  AdaBoostModel model;
  model.algorithm =
      ParseBoostAlgorithm(json.at("algorithm").get<std::string>());
  model.learning_rate = json.at("learning_rate").get<double>();
  for (const auto& stage : json.at("stages")) {
    model.stages.push_back({DecisionTree::FromJson(stage.at("stump")),
                            stage.at("weight").get<double>(),
                            stage.at("error").get<double>()});
  }
  return model;
}

AdaBoostModel FitAdaBoost(const Matrix& x, std::span<const int> labels,
                          std::span<const double> sample_weights,
                          const AdaBoostParams& params) {
  const size_t n = x.rows();
  if (labels.size() != n) throw DimensionError("labels and rows differ");
  size_t positives = 0;
  for (const int y : labels) positives += y == 1 ? 1 : 0;
  if (positives == 0 || positives == n) {
    throw FitError("AdaBoost needs samples of both classes");
  }
  if (params.n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
  if (!(params.learning_rate > 0)) {
    throw ConfigError("learning_rate must be positive");
  }

  const BinnedFeatures data(x);
  std::vector<double> weights =
      CombineWeights(labels, ClassWeights{}, sample_weights);
  const double total = static_cast<double>(n);
  for (double& w : weights) w /= total;

  TreeGrowthParams stump_params;
  stump_params.max_depth = 1;

  AdaBoostModel model;
  model.algorithm = params.algorithm;
  model.learning_rate = params.learning_rate;
  std::vector<int> miss(n);
  for (int round = 0; round < params.n_estimators; ++round) {
    DecisionTree stump =
        GrowClassificationTree(data, labels, weights, {}, stump_params, nullptr);
    double weight_sum = 0, error = 0;
    for (size_t i = 0; i < n; ++i) {
      miss[i] = Vote(stump, x.row(i)) != labels[i] ? 1 : 0;
      weight_sum += weights[i];
      error += weights[i] * miss[i];
    }
    error /= weight_sum;
    if (error >= 0.5) break;

    AdaBoostStage stage{std::move(stump), 1.0, error};
    if (params.algorithm == BoostAlgorithm::kSamme) {
      const double e = std::max(error, kMinStumpError);
      // ln(K - 1) vanishes for two classes.
      stage.weight = params.learning_rate * std::log((1.0 - e) / e);
      for (size_t i = 0; i < n; ++i) {
        if (miss[i]) weights[i] *= std::exp(stage.weight);
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        const double sign = labels[i] == 1 ? 1.0 : -1.0;
        weights[i] *= std::exp(-params.learning_rate * sign *
                               HalfLogOdds(stage.stump, x.row(i)));
      }
    }
    model.stages.push_back(std::move(stage));
    if (error <= 0) break;

    double norm = 0;
    for (const double w : weights) norm += w;
    if (!(norm > 0) || !std::isfinite(norm)) break;
    for (double& w : weights) w /= norm;
  }
  return model;
}

}  // namespace stagesurv::learners
