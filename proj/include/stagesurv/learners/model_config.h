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

#ifndef STAGESURV_LEARNERS_MODEL_CONFIG_H_
#define STAGESURV_LEARNERS_MODEL_CONFIG_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace stagesurv::learners {

enum class Learner { kLogisticRegression, kRandomForest, kAdaBoost, kSymGbdt };

inline constexpr std::array<Learner, 4> kAllLearners = {
    Learner::kLogisticRegression, Learner::kRandomForest, Learner::kAdaBoost,
    Learner::kSymGbdt};

std::string_view LearnerTag(Learner learner);   // "lr", "rf", "ada", "gbdt"
std::string_view LearnerName(Learner learner);  // "Logistic Regression", ...
std::optional<Learner> ParseLearnerTag(std::string_view tag);

using ParamValue = std::variant<int64_t, double, std::string>;

std::string FormatParam(const ParamValue& value);
nlohmann::json ParamToJson(const ParamValue& value);
ParamValue ParamFromJson(const nlohmann::json& value);

// One point of a learner's hyperparameter grid.
struct ModelConfig {
  Learner learner = Learner::kLogisticRegression;
  std::vector<std::pair<std::string, ParamValue>> params;
  uint64_t seed = 0;

  const ParamValue* Find(std::string_view name) const;
  // Typed lookups; the fallback is used when the parameter is absent. Throws
  // ConfigError on a type mismatch.
  double GetDouble(std::string_view name, double fallback) const;
  int64_t GetInt(std::string_view name, int64_t fallback) const;
  std::string GetString(std::string_view name, std::string fallback) const;
  // Throws ConfigError when a parameter is not in `allowed`.
  void CheckNames(std::initializer_list<std::string_view> allowed) const;

  // "C=0.1 class_weight=balanced"
  std::string Describe() const;
  nlohmann::json ParamsJson() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace stagesurv::learners

#endif  // STAGESURV_LEARNERS_MODEL_CONFIG_H_
