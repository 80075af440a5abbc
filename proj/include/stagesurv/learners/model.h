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

#ifndef STAGESURV_LEARNERS_MODEL_H_
#define STAGESURV_LEARNERS_MODEL_H_

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "stagesurv/common/matrix.h"
#include "stagesurv/learners/adaboost.h"
#include "stagesurv/learners/logistic.h"
#include "stagesurv/learners/model_config.h"
#include "stagesurv/learners/random_forest.h"
#include "stagesurv/learners/symgbdt.h"

namespace stagesurv::learners {

inline constexpr std::string_view kModelFormat = "stagesurv-model";
inline constexpr int kModelFormatVersion = 1;

// A fitted classifier. Immutable once built; PredictProba is reentrant.
class TrainedModel {
 public:
  using State =
      std::variant<LogisticModel, ForestModel, AdaBoostModel, SymGbdtModel>;

  TrainedModel(ModelConfig config, size_t feature_count, State state);

  const ModelConfig& config() const { return config_; }
  Learner learner() const { return config_.learner; }
  size_t feature_count() const { return feature_count_; }
  const State& state() const { return state_; }

  // P(class 1 | row). Throws DimensionError unless row has feature_count()
  // entries.
  double PredictProba(std::span<const double> row) const;
  std::vector<double> PredictProba(const Matrix& x) const;

  // Trees, boosting stages or iterations held by the model; 0 for logistic.
  size_t ensemble_size() const;
  // The model made of the first k ensemble members, as if fitted with k;
  // the size parameter in config() is rewritten to match.
  TrainedModel Truncated(size_t k) const;

  nlohmann::json ToJson() const;
  static TrainedModel FromJson(const nlohmann::json& json);

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;

 private:
  ModelConfig config_;
  size_t feature_count_ = 0;
  State state_;
};

// Name of the parameter that sets the ensemble size ("n_estimators",
// "iterations"), or empty for logistic regression.
std::string_view EnsembleSizeParam(Learner learner);

// Fits the learner named by config. Parameters absent from config take the
// learner defaults; unknown names throw ConfigError.
TrainedModel Fit(const ModelConfig& config, const Matrix& x,
                 std::span<const int> labels,
                 std::span<const double> sample_weights = {}, int threads = 1);

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_MODEL_H_
